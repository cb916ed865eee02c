// Brute-force joint enumeration. Deliberately independent of the factor
// machinery so it can serve as the reference for variable elimination.

#include <cmath>
#include <sstream>

#include "riskbn/inference.hpp"

namespace riskbn {

MarginalSet enumerate_joint(const BayesNet& net, const EvidenceSet& ev, std::size_t cap) {
  require_valid(net);
  const std::size_t n = net.nodes.size();

  std::vector<std::size_t> card(n);
  std::size_t joint = 1;
  for (std::size_t i = 0; i < n; ++i) {
    card[i] = net.nodes[i].cardinality();
    if (joint > cap / card[i]) {
      throw Error(ErrorCode::cap_exceeded, "joint distribution exceeds the cap of " + std::to_string(cap) + " entries");
    }
    joint *= card[i];
  }

  // Per-node evidence weights; empty when unobserved.
  std::vector<std::vector<double>> weight(n);
  std::ostringstream desc;
  for (const auto& [id, state] : ev.hard) {
    const NodeDef& node = net.node(id);
    auto s = node.state_index(state);
    if (!s) throw Error(ErrorCode::unknown_state, "unknown state '" + state + "' for node '" + id + "'");
    auto& w = weight[*net.index_of(id)];
    w.assign(node.cardinality(), 0.0);
    w[*s] = 1.0;
    desc << id << "=" << state << " ";
  }
  for (const auto& [id, lik] : ev.soft) {
    const NodeDef& node = net.node(id);
    if (ev.hard.count(id)) {
      throw Error(ErrorCode::invalid_evidence, "node '" + id + "' has both hard and soft evidence");
    }
    bool positive = false;
    for (double x : lik) {
      if (!std::isfinite(x) || x < 0.0) throw Error(ErrorCode::invalid_evidence, "bad soft evidence weight");
      positive = positive || x > 0.0;
    }
    if (lik.size() != node.cardinality() || !positive) {
      throw Error(ErrorCode::invalid_evidence, "soft evidence for '" + id + "' is malformed");
    }
    weight[*net.index_of(id)] = lik;
    desc << id << "~soft ";
  }

  std::vector<std::vector<std::size_t>> parents(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& p : net.nodes[i].parents()) parents[i].push_back(*net.index_of(p));
  }

  std::vector<std::vector<double>> acc(n);
  for (std::size_t i = 0; i < n; ++i) acc[i].assign(card[i], 0.0);
  double total = 0.0;

  std::vector<std::size_t> x(n, 0);
  for (std::size_t entry = 0; entry < joint; ++entry) {
    double p = 1.0;
    for (std::size_t i = 0; i < n && p != 0.0; ++i) {
      std::size_t row = 0;
      for (auto pa : parents[i]) row = row * card[pa] + x[pa];
      p *= net.nodes[i].cpt.rows[row][x[i]];
      if (!weight[i].empty()) p *= weight[i][x[i]];
    }
    if (p != 0.0) {
      total += p;
      for (std::size_t i = 0; i < n; ++i) acc[i][x[i]] += p;
    }
    for (std::size_t d = n; d-- > 0;) {
      if (++x[d] < card[d]) break;
      x[d] = 0;
    }
  }

  if (!(total > 0.0)) {
    throw Error(ErrorCode::zero_probability_evidence, "evidence has zero probability: " + desc.str());
  }

  MarginalSet out;
  out.log_evidence = ev.empty() ? 0.0 : std::log(total);
  for (std::size_t i = 0; i < n; ++i) {
    out.node_ids.push_back(net.nodes[i].id);
    for (double& v : acc[i]) v /= total;
    out.marginals.push_back(std::move(acc[i]));
  }
  return out;
}

}  // namespace riskbn
