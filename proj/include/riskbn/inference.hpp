#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riskbn/factor.hpp"
#include "riskbn/network.hpp"

namespace riskbn {

// Hard findings fix a node to a state; soft findings weight each state by a
// non-negative likelihood (virtual evidence). A node may appear in only one.
struct EvidenceSet {
  std::map<std::string, std::string> hard;
  std::map<std::string, std::vector<double>> soft;

  bool empty() const { return hard.empty() && soft.empty(); }
  std::size_t size() const { return hard.size() + soft.size(); }
  bool operator==(const EvidenceSet&) const = default;
};

struct MarginalSet {
  std::vector<std::string> node_ids;
  std::vector<std::vector<double>> marginals;
  // ln P(evidence); 0 for empty evidence.
  double log_evidence = 0.0;

  // Throws Error(unknown_node) if the node was not queried.
  const std::vector<double>& at(std::string_view id) const;
};

// Index-resolved, validated view of a network used by the inference routines.
class CompiledNet {
 public:
  // Throws ValidationFailure for invalid networks.
  explicit CompiledNet(const BayesNet& net);

  std::size_t size() const { return ids_.size(); }
  const std::string& id(std::size_t i) const { return ids_[i]; }
  std::size_t card(std::size_t i) const { return cards_[i]; }
  const std::vector<std::size_t>& parents(std::size_t i) const { return parents_[i]; }
  // CPT of node i as a factor over {i} ∪ parents(i).
  const Factor& family_factor(std::size_t i) const { return family_[i]; }

  // Throws Error(unknown_node).
  std::size_t index(std::string_view id) const;
  // Throws Error(unknown_node / unknown_state).
  std::size_t state_index(std::size_t node, std::string_view state) const;
  const std::vector<std::string>& states(std::size_t i) const { return states_[i]; }

 private:
  std::vector<std::string> ids_;
  std::vector<std::vector<std::string>> states_;
  std::vector<std::size_t> cards_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<Factor> family_;
  std::map<std::string, std::size_t, std::less<>> lookup_;
};

struct ResolvedEvidence {
  // Per node: empty for no finding, otherwise a likelihood vector (an
  // indicator for hard findings).
  std::vector<std::vector<double>> likelihood;
  // Per node: observed state for hard findings.
  std::vector<std::optional<std::size_t>> hard_state;
  std::string description;
};

// Validates evidence against the network. Throws unknown_node, unknown_state
// or invalid_evidence.
ResolvedEvidence resolve_evidence(const CompiledNet& net, const EvidenceSet& ev);

struct JointPosterior {
  Factor table;  // normalized, over the requested variables in ascending order
  double log_evidence = 0.0;
};

// Exact posterior over a subset of variables by variable elimination with a
// min-fill order (ties to the earlier-declared node). Throws
// Error(zero_probability_evidence) when P(evidence) = 0.
JointPosterior joint_posterior(const CompiledNet& net, const ResolvedEvidence& ev,
                               std::span<const std::size_t> query);

// Elimination order chosen for the given query (exposed for tests).
std::vector<std::size_t> elimination_order(const CompiledNet& net, const ResolvedEvidence& ev,
                                           std::span<const std::size_t> query);

MarginalSet posterior_marginals(const CompiledNet& net, const EvidenceSet& ev,
                                const std::optional<std::vector<std::string>>& query = std::nullopt);
MarginalSet posterior_marginals(const BayesNet& net, const EvidenceSet& ev,
                                const std::optional<std::vector<std::string>>& query = std::nullopt);
MarginalSet prior_marginals(const BayesNet& net);

double probability_of(const BayesNet& net, const EvidenceSet& ev, std::string_view node, std::string_view state);

inline constexpr std::size_t kDefaultJointCap = std::size_t{1} << 22;

// Verification oracle: marginals by summing the full joint distribution.
// Same contract as posterior_marginals; shares no arithmetic with it.
// Throws Error(cap_exceeded) when the joint has more than `cap` entries.
MarginalSet enumerate_joint(const BayesNet& net, const EvidenceSet& ev, std::size_t cap = kDefaultJointCap);

}  // namespace riskbn
