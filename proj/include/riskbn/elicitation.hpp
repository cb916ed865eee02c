#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "riskbn/json_format.hpp"
#include "riskbn/network.hpp"

namespace riskbn {

// One source's distribution over a node's states for one parent
// configuration (empty config = the node's prior). `weight` is read as the
// equivalent sample size of a hypothetical dataset.
struct ExpertJudgment {
  std::string expert_id;
  std::string node_id;
  std::vector<double> dist;
  std::map<std::string, std::string> parent_config;
  double weight = 1.0;
  std::string rationale;

  bool operator==(const ExpertJudgment&) const = default;
};

struct PooledJudgment {
  std::vector<double> dist;
  double total_ess = 0.0;
};

// Weighted linear opinion pool: sum_i (w_i / W) p_i with W = sum_i w_i.
// All judgments must share node and parent configuration.
PooledJudgment pool_judgments(std::span<const ExpertJudgment> judgments);

// Dirichlet pseudo-counts, one vector per CPT row.
struct DirichletPrior {
  std::string node_id;
  std::vector<std::vector<double>> alpha;
};

// alpha = total_ess * pooled. Throws invalid_argument for ess <= 0.
std::vector<double> ess_to_alpha(std::span<const double> pooled, double total_ess);

inline constexpr double kDefaultRowAlphaTotal = 1.0;

// Full prior for a node: elicited rows come from pooled judgments keyed by
// row index, the rest get uniform alpha summing to `default_row_total`.
DirichletPrior ess_to_prior(const BayesNet& net, std::string_view node_id,
                            const std::map<std::size_t, PooledJudgment>& elicited_rows,
                            double default_row_total = kDefaultRowAlphaTotal);

// Every row uniform with `per_state` pseudo-counts per state.
DirichletPrior uniform_prior(const BayesNet& net, std::string_view node_id, double per_state);

// Elicitation file: {"node_id", "judgments":[...]}.
struct ElicitationFile {
  std::string node_id;
  std::vector<ExpertJudgment> judgments;
};

// Accepts a single elicitation object or an array of them.
std::vector<ElicitationFile> parse_elicitation(std::string_view text);
Json elicitation_to_json(const ElicitationFile& file);

// Groups judgments by node and parent configuration, pools each group and
// converts the result to per-node Dirichlet priors.
std::map<std::string, DirichletPrior> priors_from_elicitation(const BayesNet& net,
                                                              std::span<const ElicitationFile> files,
                                                              double default_row_total = kDefaultRowAlphaTotal);

enum class SourceCategory {
  capability_evaluation,
  red_teaming,
  threat_landscape,
  historical_data,
  sociological_study,
  resource_cost_assessment,
};

std::string_view to_string(SourceCategory c);
std::optional<SourceCategory> parse_source_category(std::string_view text);

struct LikelihoodPayload {
  std::string node_id;
  std::vector<double> weights;

  bool operator==(const LikelihoodPayload&) const = default;
};

struct EvidenceRecord {
  SourceCategory source_category = SourceCategory::historical_data;
  std::string citation;
  std::variant<ExpertJudgment, LikelihoodPayload> payload;
  std::string date;  // ISO-8601
};

std::vector<EvidenceRecord> parse_ledger(std::string_view text);
Json ledger_to_json(std::span<const EvidenceRecord> records);

// Likelihood payload scaled so its largest entry is 1. Throws
// invalid_argument for judgment payloads, invalid_evidence for shape
// mismatches or no positive entry, unknown_node for unknown targets.
std::pair<std::string, std::vector<double>> ledger_to_soft_evidence(const EvidenceRecord& rec, const BayesNet& net);

}  // namespace riskbn
