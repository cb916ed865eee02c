#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "riskbn/analysis.hpp"
#include "riskbn/learning.hpp"
#include "riskbn/network.hpp"

namespace riskbn {

// Kill-chain reading order; an edge may stay within a layer or move later.
inline constexpr std::array<std::string_view, 6> kLayerOrder = {
    "capability", "affordance", "ttp", "defense", "outcome", "threshold"};

// Position in kLayerOrder, or nullopt for an unknown/missing tag.
std::optional<std::size_t> layer_rank(std::string_view layer);

struct Edge {
  std::string parent;
  std::string child;

  bool operator==(const Edge&) const = default;
};

// Every edge whose child sits in an earlier layer than its parent, in child
// declaration order then parent order. Throws invalid_argument naming the
// first node with a missing or unknown layer tag.
std::vector<Edge> check_nomological(const BayesNet& net);

// Spearman rank correlation with average ranks for ties. Returns 0 when
// either input has no rank variation. Throws invalid_argument for length
// mismatch or fewer than 3 points.
double spearman(std::span<const double> x, std::span<const double> y);

inline constexpr double kDefaultConcurrentCutoff = 0.5;

struct ConcurrentResult {
  std::vector<double> model_scores;  // P(threshold = Intolerable) per scenario
  double rho = 0.0;
  double cutoff = kDefaultConcurrentCutoff;
  bool pass = false;
};

// Zero-probability scenarios propagate as errors.
ConcurrentResult check_concurrent(const BayesNet& net, const ScenarioSet& scenarios,
                                  std::span<const double> proxy_scores, std::string_view threshold_node,
                                  double cutoff = kDefaultConcurrentCutoff);

struct PredictiveResult {
  std::string target;
  std::size_t cases_scored = 0;
  double mean_log_loss = 0.0;
  double brier = 0.0;
  // Log-loss of a uniform prediction over the target's states; the verdict
  // asks the model to beat it.
  double uniform_log_loss = 0.0;
  bool pass = false;
};

// For every holdout case with the target observed: condition on the other
// observed cells, score the predicted target distribution. Throws
// invalid_argument when the holdout is empty or never observes the target.
PredictiveResult check_predictive(const BayesNet& net, const CaseTable& holdout,
                                  const std::optional<std::string>& target = std::nullopt);

// First threshold node among the holdout columns, else the last column.
std::string default_predictive_target(const BayesNet& net, const CaseTable& holdout);

struct ChecklistItem {
  int number = 0;
  std::string kind;     // "face" or "content"
  std::string subject;  // node id or layer
  std::string question;
};

// One face-validity question per node, then one content-validity question
// per layer that has no node.
std::vector<ChecklistItem> generate_checklist(const BayesNet& net);
std::string render_checklist(std::span<const ChecklistItem> items);

struct NomologicalResult {
  std::vector<Edge> violations;
  bool pass = false;
  std::string error;  // set when layer tags are missing
};

struct ValidityReport {
  NomologicalResult nomological;
  std::optional<ConcurrentResult> concurrent;
  std::optional<PredictiveResult> predictive;
  std::vector<ChecklistItem> checklist;
};

struct ValidityInputs {
  std::optional<ScenarioSet> scenarios;
  std::optional<std::vector<double>> proxy_scores;
  std::optional<CaseTable> holdout;
  std::optional<std::string> predictive_target;
  double concurrent_cutoff = kDefaultConcurrentCutoff;
};

ValidityReport validity_report(const BayesNet& net, const ValidityInputs& inputs = {});

}  // namespace riskbn
