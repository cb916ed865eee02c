#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskbn/error.hpp"

namespace riskbn {

inline constexpr double kNormalizationTolerance = 1e-9;
inline constexpr double kRenormalizeTolerance = 1e-6;

// States every threshold node must declare, in this order.
inline constexpr std::array<std::string_view, 4> kRiskLevels = {
    "Low", "Medium", "High", "Intolerable"};

enum class ProvenanceTag { paper, elicited, derived };

std::string_view to_string(ProvenanceTag tag);
std::optional<ProvenanceTag> parse_provenance_tag(std::string_view text);

struct Provenance {
  std::string text;
  ProvenanceTag tag = ProvenanceTag::elicited;

  bool operator==(const Provenance&) const = default;
};

// Conditional probability table. Rows enumerate parent configurations in
// row-major order over parent_order: the last parent varies fastest and each
// parent's states follow their declared order.
struct Cpt {
  std::vector<std::string> parent_order;
  std::vector<std::vector<double>> rows;

  bool operator==(const Cpt&) const = default;
};

struct NodeDef {
  std::string id;
  std::string label;
  std::vector<std::string> states;
  // One of capability, affordance, ttp, defense, outcome, threshold. Only the
  // nomological check interprets it.
  std::string layer;
  std::string description;
  std::vector<Provenance> provenance;
  Cpt cpt;

  const std::vector<std::string>& parents() const { return cpt.parent_order; }
  std::size_t cardinality() const { return states.size(); }
  std::optional<std::size_t> state_index(std::string_view name) const;

  bool operator==(const NodeDef&) const = default;
};

struct BayesNet {
  std::string name;
  std::string version;
  std::string threshold_statement;
  std::vector<NodeDef> nodes;
  std::vector<std::string> threshold_nodes;

  std::optional<std::size_t> index_of(std::string_view id) const;
  const NodeDef* find(std::string_view id) const;
  // Throws Error(unknown_node).
  const NodeDef& node(std::string_view id) const;
  NodeDef& node(std::string_view id);
  bool is_threshold_node(std::string_view id) const;

  bool operator==(const BayesNet&) const = default;
};

enum class ViolationKind {
  duplicate_id,
  bad_states,
  dangling_parent,
  duplicate_parent,
  bad_row_count,
  bad_row_length,
  bad_probability,
  non_normalized,
  unknown_threshold_node,
  bad_threshold_states,
  cycle,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::vector<std::string> nodes;
  std::string detail;
  // Signed (row sum - 1) for non_normalized findings, otherwise 0.
  double deviation = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

// Reports every structural and numeric invariant violation. Findings are
// ordered by node declaration order, then by kind; cycle findings come last.
ValidationReport validate_network(const BayesNet& net);

// Parents before children; ties go to the earlier-declared node.
// Throws Error(cycle) naming a node on a cycle.
std::vector<std::string> topological_order(const BayesNet& net);

class ValidationFailure : public Error {
 public:
  explicit ValidationFailure(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Throws ValidationFailure when validate_network reports anything.
void require_valid(const BayesNet& net);

// Number of CPT rows implied by the node's parents (1 for a root). Parents
// must exist.
std::size_t expected_row_count(const BayesNet& net, const NodeDef& node);

// Row index for a full assignment of the node's parents, by state name.
// Throws unknown_node / unknown_state / invalid_argument (missing or extra
// parents).
std::size_t row_index_for(const BayesNet& net, const NodeDef& node,
                          const std::map<std::string, std::string>& config);

// Parent state names for a row index, in parent_order.
std::vector<std::string> row_config(const BayesNet& net, const NodeDef& node,
                                    std::size_t row);

}  // namespace riskbn
