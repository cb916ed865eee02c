#include "riskbn/learning.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "riskbn/inference.hpp"

namespace riskbn {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

CaseTable parse_case_csv(std::string_view text) {
  CaseTable table;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header = true;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (header) {
      std::set<std::string> seen;
      for (const auto& c : cells) {
        if (c.empty()) throw Error(ErrorCode::parse_error, "line 1: empty column name");
        if (!seen.insert(c).second) throw Error(ErrorCode::parse_error, "line 1: duplicate column '" + c + "'");
      }
      table.columns = std::move(cells);
      header = false;
      continue;
    }
    if (cells.size() != table.columns.size()) {
      throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(table.columns.size()) + " cells, found " +
                                              std::to_string(cells.size()));
    }
    std::vector<std::optional<std::string>> row;
    for (auto& c : cells) {
      if (c.empty()) {
        throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": empty cell (use ? for missing)");
      }
      if (c == kMissingMarker) {
        row.emplace_back(std::nullopt);
      } else {
        row.emplace_back(std::move(c));
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (header) throw Error(ErrorCode::parse_error, "case file has no header row");
  return table;
}

std::string write_case_csv(const CaseTable& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += row[c] ? *row[c] : std::string(kMissingMarker);
    }
    out += '\n';
  }
  return out;
}

double log_prior(const BayesNet& net, const std::map<std::string, DirichletPrior>& priors) {
  double total = 0.0;
  for (const auto& node : net.nodes) {
    auto it = priors.find(node.id);
    if (it == priors.end()) continue;
    for (std::size_t r = 0; r < node.cpt.rows.size(); ++r) {
      for (std::size_t s = 0; s < node.cardinality(); ++s) {
        const double a = it->second.alpha[r][s];
        if (a > 0.0) total += a * std::log(node.cpt.rows[r][s]);
      }
    }
  }
  return total;
}

namespace {

// Distinct observation patterns in first-appearance order; identical cases
// share one inference pass and are weighted by their multiplicity.
struct Pattern {
  std::vector<int> states;  // per node, -1 = missing
  double count = 0.0;
  std::size_t first_row = 0;
};

std::vector<Pattern> collect_patterns(const BayesNet& net, const CaseTable& data) {
  std::vector<std::size_t> column_node;
  std::set<std::size_t> used;
  for (const auto& col : data.columns) {
    auto idx = net.index_of(col);
    if (!idx) throw Error(ErrorCode::unknown_node, "case column '" + col + "' is not a network node");
    if (!used.insert(*idx).second) throw Error(ErrorCode::invalid_argument, "duplicate case column '" + col + "'");
    column_node.push_back(*idx);
  }

  std::vector<Pattern> patterns;
  std::map<std::vector<int>, std::size_t> seen;
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    const auto& row = data.rows[r];
    if (row.size() != data.columns.size()) {
      throw Error(ErrorCode::invalid_argument, "case row " + std::to_string(r) + " has the wrong number of cells");
    }
    std::vector<int> states(net.nodes.size(), -1);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!row[c]) continue;
      const NodeDef& node = net.nodes[column_node[c]];
      auto s = node.state_index(*row[c]);
      if (!s) {
        throw Error(ErrorCode::unknown_state, "case row " + std::to_string(r) + ": unknown state '" + *row[c] +
                                                  "' for node '" + node.id + "'");
      }
      states[column_node[c]] = static_cast<int>(*s);
    }
    auto [it, inserted] = seen.emplace(states, patterns.size());
    if (inserted) patterns.push_back({std::move(states), 0.0, r});
    patterns[it->second].count += 1.0;
  }
  return patterns;
}

// Maps each entry of a node's family factor to its flat CPT index
// (row * card + state).
std::vector<std::size_t> family_to_cpt(const CompiledNet& cn, std::size_t i) {
  const Factor& f = cn.family_factor(i);
  std::vector<std::size_t> out(f.size());
  std::vector<std::size_t> assignment(f.vars.size(), 0);
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    std::size_t row = 0;
    for (auto p : cn.parents(i)) {
      auto pos = static_cast<std::size_t>(std::lower_bound(f.vars.begin(), f.vars.end(), p) - f.vars.begin());
      row = row * cn.card(p) + assignment[pos];
    }
    auto self = static_cast<std::size_t>(std::lower_bound(f.vars.begin(), f.vars.end(), i) - f.vars.begin());
    out[idx] = row * cn.card(i) + assignment[self];
    for (std::size_t d = f.vars.size(); d-- > 0;) {
      if (++assignment[d] < f.cards[d]) break;
      assignment[d] = 0;
    }
  }
  return out;
}

struct EStep {
  double log_likelihood = 0.0;
  std::vector<std::vector<double>> counts;  // per node, flat row * card + state
};

EStep expectation(const BayesNet& net, const std::vector<Pattern>& patterns, bool want_counts) {
  const CompiledNet cn(net);
  const std::size_t n = cn.size();
  EStep out;
  std::vector<std::vector<std::size_t>> fam_map(n);
  if (want_counts) {
    out.counts.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.counts[i].assign(net.nodes[i].cpt.rows.size() * cn.card(i), 0.0);
      fam_map[i] = family_to_cpt(cn, i);
    }
  }

  auto observed_row = [&](std::size_t i, const std::vector<int>& x) {
    std::size_t row = 0;
    for (auto p : cn.parents(i)) row = row * cn.card(p) + static_cast<std::size_t>(x[p]);
    return row;
  };

  for (const auto& pat : patterns) {
    const auto& x = pat.states;
    ResolvedEvidence ev;
    ev.likelihood.resize(n);
    ev.hard_state.resize(n);
    bool complete = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] < 0) {
        complete = false;
        continue;
      }
      ev.likelihood[i].assign(cn.card(i), 0.0);
      ev.likelihood[i][static_cast<std::size_t>(x[i])] = 1.0;
      ev.hard_state[i] = static_cast<std::size_t>(x[i]);
    }
    ev.description = "case row " + std::to_string(pat.first_row);

    try {
      double logp = 0.0;
      if (complete) {
        for (std::size_t i = 0; i < n; ++i) {
          const double p = net.nodes[i].cpt.rows[observed_row(i, x)][static_cast<std::size_t>(x[i])];
          if (!(p > 0.0)) {
            throw Error(ErrorCode::zero_probability_evidence, "evidence has zero probability: " + ev.description);
          }
          logp += std::log(p);
          if (want_counts) out.counts[i][observed_row(i, x) * cn.card(i) + static_cast<std::size_t>(x[i])] += pat.count;
        }
      } else {
        bool have_logp = false;
        if (!want_counts) {
          logp = joint_posterior(cn, ev, {}).log_evidence;
          have_logp = true;
        }
        for (std::size_t i = 0; i < n && want_counts; ++i) {
          const auto& vars = cn.family_factor(i).vars;
          const bool family_observed =
              std::all_of(vars.begin(), vars.end(), [&](std::size_t v) { return x[v] >= 0; });
          if (family_observed) {
            out.counts[i][observed_row(i, x) * cn.card(i) + static_cast<std::size_t>(x[i])] += pat.count;
            continue;
          }
          JointPosterior jp = joint_posterior(cn, ev, vars);
          if (!have_logp) {
            logp = jp.log_evidence;
            have_logp = true;
          }
          for (std::size_t k = 0; k < jp.table.size(); ++k) {
            out.counts[i][fam_map[i][k]] += pat.count * jp.table.values[k];
          }
        }
      }
      out.log_likelihood += pat.count * logp;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::zero_probability_evidence) {
        throw Error(ErrorCode::zero_probability_evidence,
                    "case row " + std::to_string(pat.first_row) + " has zero probability under the current parameters");
      }
      throw;
    }
  }
  return out;
}

std::map<std::string, DirichletPrior> resolve_priors(const BayesNet& net, const EmConfig& cfg) {
  std::map<std::string, DirichletPrior> priors;
  for (const auto& [id, prior] : cfg.priors) {
    const NodeDef& node = net.node(id);
    const std::size_t rows = expected_row_count(net, node);
    if (prior.alpha.size() != rows) {
      throw Error(ErrorCode::invalid_argument, "prior for '" + id + "' has " + std::to_string(prior.alpha.size()) +
                                                   " rows, expected " + std::to_string(rows));
    }
    for (const auto& row : prior.alpha) {
      if (row.size() != node.cardinality()) {
        throw Error(ErrorCode::invalid_argument, "prior for '" + id + "' has a row of the wrong length");
      }
      for (double a : row) {
        if (!std::isfinite(a) || a < 0.0) throw Error(ErrorCode::invalid_argument, "prior for '" + id + "' has a negative pseudo-count");
      }
    }
  }
  for (const auto& node : net.nodes) {
    auto it = cfg.priors.find(node.id);
    if (it != cfg.priors.end()) {
      priors[node.id] = it->second;
    } else {
      DirichletPrior p;
      p.node_id = node.id;
      p.alpha.assign(node.cpt.rows.size(),
                     std::vector<double>(node.cardinality(), cfg.default_row_total / static_cast<double>(node.cardinality())));
      priors[node.id] = std::move(p);
    }
  }
  return priors;
}

double row_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

BayesNet prior_mean_start(const BayesNet& net, const std::map<std::string, DirichletPrior>& priors) {
  BayesNet out = net;
  for (auto& node : out.nodes) {
    const auto& alpha = priors.at(node.id).alpha;
    for (std::size_t r = 0; r < node.cpt.rows.size(); ++r) {
      const double total = row_sum(alpha[r]);
      for (std::size_t s = 0; s < node.cardinality(); ++s) {
        node.cpt.rows[r][s] = total > 0.0 ? alpha[r][s] / total : 1.0 / static_cast<double>(node.cardinality());
      }
    }
  }
  return out;
}

BayesNet jittered_start(const BayesNet& mean, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  BayesNet out = mean;
  for (auto& node : out.nodes) {
    for (auto& row : node.cpt.rows) {
      std::vector<double> draw(row.size());
      for (double& d : draw) d = -std::log(uniform());
      const double total = row_sum(draw);
      for (std::size_t s = 0; s < row.size(); ++s) row[s] = 0.5 * row[s] + 0.5 * draw[s] / total;
    }
  }
  return out;
}

void maximize(BayesNet& net, const EStep& step, const std::map<std::string, DirichletPrior>& priors) {
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    NodeDef& node = net.nodes[i];
    const std::size_t k = node.cardinality();
    const auto& alpha = priors.at(node.id).alpha;
    for (std::size_t r = 0; r < node.cpt.rows.size(); ++r) {
      double total = 0.0;
      for (std::size_t s = 0; s < k; ++s) total += step.counts[i][r * k + s] + alpha[r][s];
      if (!(total > 0.0)) continue;
      for (std::size_t s = 0; s < k; ++s) node.cpt.rows[r][s] = (step.counts[i][r * k + s] + alpha[r][s]) / total;
    }
  }
}

EmResult run_em(BayesNet theta, const std::vector<Pattern>& patterns,
                const std::map<std::string, DirichletPrior>& priors, const EmConfig& cfg) {
  EmResult result;
  EStep step = expectation(theta, patterns, true);
  result.log_likelihood_trace.push_back(step.log_likelihood);
  result.objective_trace.push_back(step.log_likelihood + log_prior(theta, priors));
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    maximize(theta, step, priors);
    step = expectation(theta, patterns, true);
    const double objective = step.log_likelihood + log_prior(theta, priors);
    const double previous = result.objective_trace.back();
    result.log_likelihood_trace.push_back(step.log_likelihood);
    result.objective_trace.push_back(objective);
    result.iterations = it;
    if (std::abs(objective - previous) < cfg.log_likelihood_tolerance) {
      result.converged = true;
      break;
    }
  }
  result.net = std::move(theta);
  return result;
}

}  // namespace

EmResult em_fit(const BayesNet& net, const CaseTable& data, const EmConfig& cfg) {
  if (cfg.max_iterations < 1) throw Error(ErrorCode::invalid_argument, "max_iterations must be at least 1");
  if (!(cfg.log_likelihood_tolerance > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
  if (cfg.restarts < 0) throw Error(ErrorCode::invalid_argument, "restarts must be non-negative");
  require_valid(net);

  const auto priors = resolve_priors(net, cfg);
  const auto patterns = collect_patterns(net, data);
  if (patterns.empty()) {
    for (const auto& [id, prior] : priors) {
      for (const auto& row : prior.alpha) {
        if (!(row_sum(row) > 0.0)) {
          throw Error(ErrorCode::invalid_argument, "no case data and a zero-total prior row for '" + id + "'");
        }
      }
    }
  }

  const BayesNet start = prior_mean_start(net, priors);
  EmResult best = run_em(start, patterns, priors, cfg);
  for (int r = 1; r <= cfg.restarts; ++r) {
    EmResult candidate = run_em(jittered_start(start, cfg.seed + static_cast<std::uint64_t>(r)), patterns, priors, cfg);
    if (candidate.objective_trace.back() > best.objective_trace.back()) best = std::move(candidate);
  }
  return best;
}

double log_likelihood(const BayesNet& net, const CaseTable& data) {
  require_valid(net);
  return expectation(net, collect_patterns(net, data), false).log_likelihood;
}

}  // namespace riskbn
