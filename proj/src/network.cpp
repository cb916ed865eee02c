#include "riskbn/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

namespace riskbn {

std::string_view to_string(ProvenanceTag tag) {
  switch (tag) {
    case ProvenanceTag::paper: return "PAPER";
    case ProvenanceTag::elicited: return "ELICITED";
    case ProvenanceTag::derived: return "DERIVED";
  }
  return "ELICITED";
}

std::optional<ProvenanceTag> parse_provenance_tag(std::string_view text) {
  if (text == "PAPER") return ProvenanceTag::paper;
  if (text == "ELICITED") return ProvenanceTag::elicited;
  if (text == "DERIVED") return ProvenanceTag::derived;
  return std::nullopt;
}

std::optional<std::size_t> NodeDef::state_index(std::string_view name) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> BayesNet::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return i;
  }
  return std::nullopt;
}

const NodeDef* BayesNet::find(std::string_view id) const {
  auto idx = index_of(id);
  return idx ? &nodes[*idx] : nullptr;
}

const NodeDef& BayesNet::node(std::string_view id) const {
  if (const NodeDef* n = find(id)) return *n;
  throw Error(ErrorCode::unknown_node, "unknown node '" + std::string(id) + "'");
}

NodeDef& BayesNet::node(std::string_view id) {
  auto idx = index_of(id);
  if (!idx) throw Error(ErrorCode::unknown_node, "unknown node '" + std::string(id) + "'");
  return nodes[*idx];
}

bool BayesNet::is_threshold_node(std::string_view id) const {
  return std::find(threshold_nodes.begin(), threshold_nodes.end(), id) != threshold_nodes.end();
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::duplicate_id: return "duplicate-id";
    case ViolationKind::bad_states: return "bad-states";
    case ViolationKind::dangling_parent: return "dangling-parent";
    case ViolationKind::duplicate_parent: return "duplicate-parent";
    case ViolationKind::bad_row_count: return "bad-row-count";
    case ViolationKind::bad_row_length: return "bad-row-length";
    case ViolationKind::bad_probability: return "bad-probability";
    case ViolationKind::non_normalized: return "non-normalized";
    case ViolationKind::unknown_threshold_node: return "unknown-threshold-node";
    case ViolationKind::bad_threshold_states: return "bad-threshold-states";
    case ViolationKind::cycle: return "cycle";
  }
  return "unknown";
}

namespace {

std::string describe_row(std::size_t row) { return "row " + std::to_string(row); }

void check_states(const NodeDef& node, std::vector<Violation>& out) {
  if (node.states.size() < 2) {
    out.push_back({ViolationKind::bad_states, {node.id}, "fewer than 2 states"});
    return;
  }
  std::set<std::string_view> seen;
  for (const auto& s : node.states) {
    if (s.empty()) {
      out.push_back({ViolationKind::bad_states, {node.id}, "empty state name"});
    } else if (s.find(',') != std::string::npos) {
      out.push_back({ViolationKind::bad_states, {node.id}, "state name '" + s + "' contains a comma"});
    } else if (!seen.insert(s).second) {
      out.push_back({ViolationKind::bad_states, {node.id}, "duplicate state name '" + s + "'"});
    }
  }
}

void check_rows(const NodeDef& node, std::vector<Violation>& out) {
  for (std::size_t r = 0; r < node.cpt.rows.size(); ++r) {
    const auto& row = node.cpt.rows[r];
    if (row.size() != node.states.size()) {
      out.push_back({ViolationKind::bad_row_length, {node.id},
                     describe_row(r) + " has " + std::to_string(row.size()) + " entries, expected " +
                         std::to_string(node.states.size())});
      continue;
    }
    bool in_range = true;
    double sum = 0.0;
    for (double p : row) {
      if (!std::isfinite(p) || p < 0.0 || p > 1.0) in_range = false;
      sum += p;
    }
    if (!in_range) {
      out.push_back({ViolationKind::bad_probability, {node.id}, describe_row(r) + " has an entry outside [0,1]"});
      continue;
    }
    if (std::abs(sum - 1.0) > kNormalizationTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << describe_row(r) << " sums to " << sum;
      Violation v{ViolationKind::non_normalized, {node.id}, msg.str()};
      v.deviation = sum - 1.0;
      out.push_back(std::move(v));
    }
  }
}

// Strongly connected components with more than one member, or with a
// self-loop, over edges whose parent exists.
std::vector<std::vector<std::size_t>> cyclic_components(const BayesNet& net) {
  const std::size_t n = net.nodes.size();
  std::vector<std::vector<std::size_t>> children(n);
  std::vector<bool> self_loop(n, false);
  for (std::size_t c = 0; c < n; ++c) {
    for (const auto& p : net.nodes[c].parents()) {
      if (auto pi = net.index_of(p)) {
        if (*pi == c) self_loop[c] = true;
        children[*pi].push_back(c);
      }
    }
  }

  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> comps;
  int counter = 0;

  std::function<void(std::size_t)> strongconnect = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : children[v]) {
      if (index[w] < 0) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      if (comp.size() > 1 || self_loop[v]) {
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] < 0) strongconnect(v);
  }
  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return comps;
}

}  // namespace

ValidationReport validate_network(const BayesNet& net) {
  ValidationReport report;
  auto& out = report.violations;

  std::set<std::string_view> ids;
  for (const auto& node : net.nodes) {
    if (node.id.empty()) {
      out.push_back({ViolationKind::duplicate_id, {node.id}, "empty node id"});
    } else if (!ids.insert(node.id).second) {
      out.push_back({ViolationKind::duplicate_id, {node.id}, "node id declared more than once"});
    }
    check_states(node, out);

    bool parents_resolved = true;
    std::set<std::string_view> seen_parents;
    for (const auto& p : node.parents()) {
      if (!net.find(p)) {
        out.push_back({ViolationKind::dangling_parent, {node.id, p}, "parent '" + p + "' does not exist"});
        parents_resolved = false;
      } else if (!seen_parents.insert(p).second) {
        out.push_back({ViolationKind::duplicate_parent, {node.id, p}, "parent '" + p + "' listed twice"});
        parents_resolved = false;
      }
    }
    if (parents_resolved) {
      const std::size_t expected = expected_row_count(net, node);
      if (node.cpt.rows.size() != expected) {
        out.push_back({ViolationKind::bad_row_count, {node.id},
                       "CPT has " + std::to_string(node.cpt.rows.size()) + " rows, expected " +
                           std::to_string(expected)});
      }
    }
    check_rows(node, out);
  }

  for (const auto& t : net.threshold_nodes) {
    const NodeDef* node = net.find(t);
    if (!node) {
      out.push_back({ViolationKind::unknown_threshold_node, {t}, "threshold node '" + t + "' does not exist"});
      continue;
    }
    bool exact = node->states.size() == kRiskLevels.size() &&
                 std::equal(node->states.begin(), node->states.end(), kRiskLevels.begin());
    if (!exact) {
      out.push_back({ViolationKind::bad_threshold_states, {t},
                     "threshold node states must be exactly Low, Medium, High, Intolerable"});
    }
  }

  for (const auto& comp : cyclic_components(net)) {
    Violation v{ViolationKind::cycle, {}, "parent relation is cyclic"};
    for (std::size_t i : comp) v.nodes.push_back(net.nodes[i].id);
    out.push_back(std::move(v));
  }
  return report;
}

std::vector<std::string> topological_order(const BayesNet& net) {
  const std::size_t n = net.nodes.size();
  std::vector<std::size_t> pending(n, 0);
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (const auto& p : net.nodes[c].parents()) {
      auto pi = net.index_of(p);
      if (!pi) {
        throw Error(ErrorCode::validation_failed,
                    "node '" + net.nodes[c].id + "' references missing parent '" + p + "'");
      }
      children[*pi].push_back(c);
      ++pending[c];
    }
  }

  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (pending[i] == 0) ready.push(i);
  }
  std::vector<std::string> order;
  order.reserve(n);
  while (!ready.empty()) {
    std::size_t v = ready.top();
    ready.pop();
    order.push_back(net.nodes[v].id);
    for (std::size_t c : children[v]) {
      if (--pending[c] == 0) ready.push(c);
    }
  }
  if (order.size() != n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (pending[i] > 0) {
        throw Error(ErrorCode::cycle, "cycle detected involving node '" + net.nodes[i].id + "'");
      }
    }
  }
  return order;
}

namespace {

std::string summarize(const ValidationReport& report) {
  std::string msg = "network failed validation (" + std::to_string(report.violations.size()) + " violation" +
                     (report.violations.size() == 1 ? "" : "s") + ")";
  if (!report.violations.empty()) {
    const auto& v = report.violations.front();
    msg += ": ";
    msg += to_string(v.kind);
    msg += " [";
    for (std::size_t i = 0; i < v.nodes.size(); ++i) {
      if (i) msg += ",";
      msg += v.nodes[i];
    }
    msg += "] " + v.detail;
  }
  return msg;
}

}  // namespace

ValidationFailure::ValidationFailure(ValidationReport report)
    : Error(ErrorCode::validation_failed, summarize(report)), report_(std::move(report)) {}

void require_valid(const BayesNet& net) {
  auto report = validate_network(net);
  if (!report.ok()) throw ValidationFailure(std::move(report));
}

std::size_t expected_row_count(const BayesNet& net, const NodeDef& node) {
  std::size_t rows = 1;
  for (const auto& p : node.parents()) rows *= net.node(p).cardinality();
  return rows;
}

std::size_t row_index_for(const BayesNet& net, const NodeDef& node,
                          const std::map<std::string, std::string>& config) {
  for (const auto& [k, v] : config) {
    const auto& parents = node.parents();
    if (std::find(parents.begin(), parents.end(), k) == parents.end()) {
      throw Error(ErrorCode::invalid_argument, "'" + k + "' is not a parent of '" + node.id + "'");
    }
  }
  std::size_t row = 0;
  for (const auto& p : node.parents()) {
    const NodeDef& parent = net.node(p);
    auto it = config.find(p);
    if (it == config.end()) {
      throw Error(ErrorCode::invalid_argument,
                  "parent configuration for '" + node.id + "' is missing parent '" + p + "'");
    }
    auto s = parent.state_index(it->second);
    if (!s) {
      throw Error(ErrorCode::unknown_state, "unknown state '" + it->second + "' for node '" + p + "'");
    }
    row = row * parent.cardinality() + *s;
  }
  return row;
}

std::vector<std::string> row_config(const BayesNet& net, const NodeDef& node, std::size_t row) {
  const auto& parents = node.parents();
  std::vector<std::string> out(parents.size());
  for (std::size_t k = parents.size(); k-- > 0;) {
    const NodeDef& parent = net.node(parents[k]);
    out[k] = parent.states[row % parent.cardinality()];
    row /= parent.cardinality();
  }
  return out;
}

}  // namespace riskbn
