#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riskbn/inference.hpp"
#include "riskbn/json_format.hpp"
#include "riskbn/network.hpp"

namespace riskbn {

// Configuration default only; published assessments should set it.
struct AlarmRule {
  std::string state = "Intolerable";
  double cutoff = 0.5;
};

// Parses "state:cutoff". Throws invalid_argument.
AlarmRule parse_alarm_rule(std::string_view text);

struct RiskAssessment {
  std::string threshold_node;
  std::vector<double> posterior;  // Low, Medium, High, Intolerable
  bool alarm = false;
  AlarmRule rule;
};

// Throws not_threshold_node, invalid_argument for a bad rule, and inference
// errors.
RiskAssessment assess_threshold(const BayesNet& net, const EvidenceSet& ev, std::string_view threshold_node,
                                const AlarmRule& rule = {});
RiskAssessment assess_from_marginal(std::string_view threshold_node, std::vector<double> posterior,
                                    const AlarmRule& rule);

struct DiagnosisEntry {
  std::string node;
  std::string state;
  double prior = 0.0;
  double posterior = 0.0;
  double lift = 0.0;  // posterior - prior
};

// Prior vs posterior for every state of the ranked nodes, sorted by
// descending |lift|; ties keep node declaration order, then state order.
std::vector<DiagnosisEntry> diagnose(const BayesNet& net, const EvidenceSet& outcome_evidence,
                                     std::span<const std::string> rank_over);

struct SensitivityEntry {
  std::string source;
  std::size_t row = 0;                     // CPT row of the perturbed parameter
  std::vector<std::string> parent_states;  // that row's parent configuration
  std::string state;
  double parameter = 0.0;  // unperturbed value
  double baseline = 0.0;   // target probability at the unperturbed network
  double low = 0.0;        // target probability with the parameter lowered
  double high = 0.0;       // target probability with the parameter raised
  double range = 0.0;      // |high - low|
};

struct SensitivityReport {
  std::string target_node;
  std::string target_state;
  double baseline = 0.0;
  double delta = 0.0;
  std::vector<SensitivityEntry> entries;
};

// Sets row[state] to `value` and rescales the other entries proportionally to
// fill the remaining mass (uniformly when they are all zero).
std::vector<double> covary_row(std::span<const double> row, std::size_t state, double value);

// One-way sensitivity of P(target) to every parameter of the source nodes
// (root nodes by default): each parameter is moved to min(1, p + delta) and
// max(0, p - delta). Entries are sorted by descending range with ties in
// source, row, state order.
SensitivityReport sensitivity(const BayesNet& net, std::string_view target_node, std::string_view target_state,
                              const std::optional<std::vector<std::string>>& sources = std::nullopt,
                              double delta = 0.1);

// Sort key used for ranking: values are compared on a 1e-10 grid so that
// results differing only by rounding noise tie.
long long ranking_key(double magnitude);

struct Scenario {
  std::string name;
  std::string description;
  EvidenceSet evidence;
};

using ScenarioSet = std::vector<Scenario>;

enum class ScenarioStatus { ok, inconsistent, error };
std::string_view to_string(ScenarioStatus status);

struct ScenarioOutcome {
  std::string name;
  ScenarioStatus status = ScenarioStatus::ok;
  std::optional<RiskAssessment> assessment;
  std::string error_code;
  std::string message;
};

// One outcome per scenario, in input order. Zero-probability evidence marks
// the scenario inconsistent; other per-scenario failures are reported with
// their error code. Throws only for a bad threshold node or rule.
std::vector<ScenarioOutcome> run_scenarios(const BayesNet& net, const ScenarioSet& scenarios,
                                           std::string_view threshold_node, const AlarmRule& rule = {});

EvidenceSet evidence_from_json(const Json& obj);
Json evidence_to_json(const EvidenceSet& ev);
// Scenario file: {"scenarios":[{"name","description","evidence":{...}}]}.
// Throws parse_error, including for duplicate names.
ScenarioSet scenarios_from_json(const Json& doc);
ScenarioSet parse_scenarios(std::string_view text);
Json scenarios_to_json(const ScenarioSet& set);

// First declared threshold node; throws not_threshold_node when none exist.
std::string default_threshold_node(const BayesNet& net);

}  // namespace riskbn
