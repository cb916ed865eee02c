#include "riskbn/inference.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace riskbn {

const std::vector<double>& MarginalSet::at(std::string_view id) const {
  for (std::size_t i = 0; i < node_ids.size(); ++i) {
    if (node_ids[i] == id) return marginals[i];
  }
  throw Error(ErrorCode::unknown_node, "no marginal for node '" + std::string(id) + "'");
}

CompiledNet::CompiledNet(const BayesNet& net) {
  require_valid(net);
  const std::size_t n = net.nodes.size();
  ids_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeDef& node = net.nodes[i];
    ids_.push_back(node.id);
    states_.push_back(node.states);
    cards_.push_back(node.cardinality());
    lookup_.emplace(node.id, i);
  }
  parents_.resize(n);
  family_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeDef& node = net.nodes[i];
    for (const auto& p : node.parents()) parents_[i].push_back(lookup_.at(p));

    Factor& f = family_[i];
    f.vars = parents_[i];
    f.vars.push_back(i);
    std::sort(f.vars.begin(), f.vars.end());
    for (auto v : f.vars) f.cards.push_back(cards_[v]);
    std::size_t total = 1;
    for (auto c : f.cards) total *= c;
    f.values.assign(total, 0.0);

    // Stride of each variable within the family factor.
    std::vector<std::size_t> stride(f.vars.size());
    std::size_t s = 1;
    for (std::size_t k = f.vars.size(); k-- > 0;) {
      stride[k] = s;
      s *= f.cards[k];
    }
    auto stride_of = [&](std::size_t var) {
      auto it = std::lower_bound(f.vars.begin(), f.vars.end(), var);
      return stride[static_cast<std::size_t>(it - f.vars.begin())];
    };
    const std::size_t child_stride = stride_of(i);
    std::vector<std::size_t> parent_stride;
    for (auto p : parents_[i]) parent_stride.push_back(stride_of(p));

    for (std::size_t row = 0; row < node.cpt.rows.size(); ++row) {
      std::size_t base = 0;
      std::size_t rem = row;
      for (std::size_t k = parents_[i].size(); k-- > 0;) {
        base += (rem % cards_[parents_[i][k]]) * parent_stride[k];
        rem /= cards_[parents_[i][k]];
      }
      for (std::size_t st = 0; st < cards_[i]; ++st) {
        f.values[base + st * child_stride] = node.cpt.rows[row][st];
      }
    }
  }
}

std::size_t CompiledNet::index(std::string_view id) const {
  auto it = lookup_.find(id);
  if (it == lookup_.end()) throw Error(ErrorCode::unknown_node, "unknown node '" + std::string(id) + "'");
  return it->second;
}

std::size_t CompiledNet::state_index(std::size_t node, std::string_view state) const {
  const auto& st = states_[node];
  for (std::size_t s = 0; s < st.size(); ++s) {
    if (st[s] == state) return s;
  }
  throw Error(ErrorCode::unknown_state,
              "unknown state '" + std::string(state) + "' for node '" + ids_[node] + "'");
}

ResolvedEvidence resolve_evidence(const CompiledNet& net, const EvidenceSet& ev) {
  ResolvedEvidence out;
  out.likelihood.resize(net.size());
  out.hard_state.resize(net.size());
  std::ostringstream desc;
  bool first = true;
  for (const auto& [node, state] : ev.hard) {
    const std::size_t i = net.index(node);
    const std::size_t s = net.state_index(i, state);
    out.hard_state[i] = s;
    out.likelihood[i].assign(net.card(i), 0.0);
    out.likelihood[i][s] = 1.0;
    desc << (first ? "" : ", ") << node << "=" << state;
    first = false;
  }
  for (const auto& [node, weights] : ev.soft) {
    const std::size_t i = net.index(node);
    if (ev.hard.count(node)) {
      throw Error(ErrorCode::invalid_evidence, "node '" + node + "' has both hard and soft evidence");
    }
    if (weights.size() != net.card(i)) {
      throw Error(ErrorCode::invalid_evidence, "soft evidence for '" + node + "' has " +
                                                   std::to_string(weights.size()) + " weights, expected " +
                                                   std::to_string(net.card(i)));
    }
    bool positive = false;
    for (double w : weights) {
      if (!std::isfinite(w) || w < 0.0) {
        throw Error(ErrorCode::invalid_evidence, "soft evidence for '" + node + "' has a negative or non-finite weight");
      }
      if (w > 0.0) positive = true;
    }
    if (!positive) {
      throw Error(ErrorCode::invalid_evidence, "soft evidence for '" + node + "' has no positive weight");
    }
    out.likelihood[i] = weights;
    desc << (first ? "" : ", ") << node << "~[";
    for (std::size_t k = 0; k < weights.size(); ++k) desc << (k ? "," : "") << weights[k];
    desc << "]";
    first = false;
  }
  out.description = desc.str();
  return out;
}

namespace {

// Ancestral closure of the query and evidence nodes; everything else is
// barren and sums out to one.
std::vector<bool> relevant_nodes(const CompiledNet& net, const ResolvedEvidence& ev,
                                 std::span<const std::size_t> query) {
  std::vector<bool> keep(net.size(), false);
  std::vector<std::size_t> stack(query.begin(), query.end());
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (!ev.likelihood[i].empty()) stack.push_back(i);
  }
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    if (keep[v]) continue;
    keep[v] = true;
    for (auto p : net.parents(v)) stack.push_back(p);
  }
  return keep;
}

std::vector<std::size_t> min_fill_order(std::size_t n, const std::vector<std::vector<std::size_t>>& scopes,
                                        const std::vector<bool>& eliminable) {
  std::vector<std::set<std::size_t>> adj(n);
  for (const auto& scope : scopes) {
    for (auto a : scope) {
      for (auto b : scope) {
        if (a != b) adj[a].insert(b);
      }
    }
  }
  std::vector<bool> pending = eliminable;
  std::size_t remaining = static_cast<std::size_t>(std::count(pending.begin(), pending.end(), true));
  std::vector<std::size_t> order;
  order.reserve(remaining);
  while (remaining > 0) {
    std::size_t best = n;
    std::size_t best_fill = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (!pending[v]) continue;
      std::size_t fill = 0;
      for (auto a = adj[v].begin(); a != adj[v].end(); ++a) {
        for (auto b = std::next(a); b != adj[v].end(); ++b) {
          if (!adj[*a].count(*b)) ++fill;
        }
      }
      if (best == n || fill < best_fill) {
        best = v;
        best_fill = fill;
      }
    }
    for (auto a : adj[best]) {
      for (auto b : adj[best]) {
        if (a != b) adj[a].insert(b);
      }
    }
    for (auto a : adj[best]) adj[a].erase(best);
    adj[best].clear();
    pending[best] = false;
    --remaining;
    order.push_back(best);
  }
  return order;
}

std::vector<Factor> initial_factors(const CompiledNet& net, const ResolvedEvidence& ev, const std::vector<bool>& keep) {
  std::vector<Factor> factors;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (!keep[i]) continue;
    if (ev.likelihood[i].empty()) {
      factors.push_back(net.family_factor(i));
    } else {
      Factor lik;
      lik.vars = {i};
      lik.cards = {net.card(i)};
      lik.values = ev.likelihood[i];
      factors.push_back(multiply(net.family_factor(i), lik));
    }
  }
  return factors;
}

std::vector<bool> eliminable_set(const std::vector<bool>& keep, std::span<const std::size_t> query) {
  std::vector<bool> elim = keep;
  for (auto q : query) elim[q] = false;
  return elim;
}

}  // namespace

std::vector<std::size_t> elimination_order(const CompiledNet& net, const ResolvedEvidence& ev,
                                           std::span<const std::size_t> query) {
  const auto keep = relevant_nodes(net, ev, query);
  std::vector<std::vector<std::size_t>> scopes;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (keep[i]) scopes.push_back(net.family_factor(i).vars);
  }
  return min_fill_order(net.size(), scopes, eliminable_set(keep, query));
}

JointPosterior joint_posterior(const CompiledNet& net, const ResolvedEvidence& ev,
                               std::span<const std::size_t> query) {
  for (auto q : query) {
    if (q >= net.size()) throw Error(ErrorCode::unknown_node, "query index out of range");
  }
  const auto keep = relevant_nodes(net, ev, query);
  std::vector<Factor> factors = initial_factors(net, ev, keep);

  std::vector<std::vector<std::size_t>> scopes;
  for (const auto& f : factors) scopes.push_back(f.vars);
  const auto order = min_fill_order(net.size(), scopes, eliminable_set(keep, query));

  for (std::size_t var : order) {
    Factor product = unit_factor();
    std::vector<Factor> rest;
    rest.reserve(factors.size());
    for (auto& f : factors) {
      if (f.contains(var)) {
        product = multiply(product, f);
      } else {
        rest.push_back(std::move(f));
      }
    }
    Factor reduced = sum_out(product, var);
    rescale_if_small(reduced);
    rest.push_back(std::move(reduced));
    factors = std::move(rest);
  }

  Factor result = unit_factor();
  for (const auto& f : factors) result = multiply(result, f);

  const double mass = total_mass(result);
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw Error(ErrorCode::zero_probability_evidence,
                "evidence has zero probability: " + (ev.description.empty() ? std::string("(none)") : ev.description));
  }
  for (double& v : result.values) v /= mass;
  JointPosterior out;
  out.log_evidence = std::log(mass) + result.log_scale;
  result.log_scale = 0.0;
  out.table = std::move(result);
  return out;
}

MarginalSet posterior_marginals(const CompiledNet& net, const EvidenceSet& ev,
                                const std::optional<std::vector<std::string>>& query) {
  const ResolvedEvidence resolved = resolve_evidence(net, ev);
  std::vector<std::size_t> targets;
  if (query) {
    for (const auto& id : *query) targets.push_back(net.index(id));
  } else {
    for (std::size_t i = 0; i < net.size(); ++i) targets.push_back(i);
  }

  MarginalSet out;
  if (!ev.empty()) {
    out.log_evidence = joint_posterior(net, resolved, {}).log_evidence;
  }
  for (auto i : targets) {
    out.node_ids.push_back(net.id(i));
    if (resolved.hard_state[i]) {
      std::vector<double> indicator(net.card(i), 0.0);
      indicator[*resolved.hard_state[i]] = 1.0;
      out.marginals.push_back(std::move(indicator));
      continue;
    }
    const std::size_t q[] = {i};
    out.marginals.push_back(joint_posterior(net, resolved, q).table.values);
  }
  return out;
}

MarginalSet posterior_marginals(const BayesNet& net, const EvidenceSet& ev,
                                const std::optional<std::vector<std::string>>& query) {
  return posterior_marginals(CompiledNet(net), ev, query);
}

MarginalSet prior_marginals(const BayesNet& net) { return posterior_marginals(net, EvidenceSet{}); }

double probability_of(const BayesNet& net, const EvidenceSet& ev, std::string_view node, std::string_view state) {
  CompiledNet compiled(net);
  const std::size_t i = compiled.index(node);
  const std::size_t s = compiled.state_index(i, state);
  auto m = posterior_marginals(compiled, ev, std::vector<std::string>{std::string(node)});
  return m.marginals.front()[s];
}

}  // namespace riskbn
