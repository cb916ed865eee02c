#pragma once

// Request parsing and response rendering shared by the CLI and the HTTP
// service. Both front ends build the same request structs and print the
// canonical JSON of the same response objects, so their output is
// byte-identical.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskbn/analysis.hpp"
#include "riskbn/elicitation.hpp"
#include "riskbn/error.hpp"
#include "riskbn/json_format.hpp"
#include "riskbn/learning.hpp"
#include "riskbn/network.hpp"
#include "riskbn/validity.hpp"

namespace riskbn::api {

struct QueryRequest {
  EvidenceSet evidence;
  std::optional<std::vector<std::string>> query;
  // Defaults to the first threshold node; no assessment when there is none.
  std::optional<std::string> threshold;
  AlarmRule alarm;
};

struct SensitivityRequest {
  std::string target_node;
  std::string target_state;
  double delta = 0.1;
  std::optional<std::vector<std::string>> sources;
};

struct DiagnoseRequest {
  EvidenceSet outcome_evidence;
  std::vector<std::string> rank_over;
};

struct ScenarioRunRequest {
  ScenarioSet scenarios;
  std::optional<std::string> threshold;
  AlarmRule alarm;
};

// Request bodies. All parsers reject unknown fields with parse_error.
//   query:       {"evidence", "query", "threshold", "alarm":{"state","cutoff"}}
//   sensitivity: {"target":{"node","state"}, "delta", "sources"}
//   diagnose:    {"outcome_evidence", "rank_over"}
//   scenarios:   {"scenarios":[...], "threshold", "alarm"}
//   validate:    {"scenarios":[...], "proxy_scores":[...], "holdout_csv", "target", "cutoff"}
QueryRequest parse_query_request(const Json& body);
SensitivityRequest parse_sensitivity_request(const Json& body);
DiagnoseRequest parse_diagnose_request(const Json& body);
ScenarioRunRequest parse_scenario_request(const Json& body);
ValidityInputs parse_validate_request(const Json& body);

// Parses a request body; an empty body reads as {}. Throws parse_error.
Json parse_body(std::string_view text);

// "node=state" -> pair. Throws invalid_argument.
std::pair<std::string, std::string> split_assignment(std::string_view text);
// Comma-separated list of numbers. Throws invalid_argument.
std::vector<double> parse_number_list(std::string_view text);
// Proxy score file: a JSON array of numbers or whitespace/comma separated
// numbers.
std::vector<double> parse_proxy_scores(std::string_view text);

Json query_response(const BayesNet& net, const QueryRequest& req);
Json sensitivity_response(const BayesNet& net, const SensitivityRequest& req);
Json diagnose_response(const BayesNet& net, const DiagnoseRequest& req);
Json scenario_response(const BayesNet& net, const ScenarioRunRequest& req);
Json validity_response(const BayesNet& net, const ValidityInputs& inputs);

Json network_summary(const BayesNet& net);
Json validation_response(const ValidationReport& report, const std::vector<std::string>& warnings);
Json pool_response(const std::string& node_id, const std::map<std::string, std::string>& config,
                   std::size_t judgments, const PooledJudgment& pooled);
Json learn_response(const EmResult& result, bool include_network);

Json assessment_to_json(const RiskAssessment& a);
Json violation_to_json(const Violation& v);
Json error_response(const Error& e);

// Aligned-column renderings of the same responses for humans.
std::string render_text_query(const BayesNet& net, const Json& response);
std::string render_text_sensitivity(const Json& response);
std::string render_text_diagnose(const Json& response);
std::string render_text_scenarios(const Json& response);
std::string render_text_validity(const Json& response);
std::string render_text_validation(const Json& response);
std::string render_text_pool(const Json& response);
std::string render_text_learn(const Json& response);
std::string render_text_summary(const Json& response);

// Pads each column to its widest cell; two spaces between columns.
std::string render_table(const std::vector<std::vector<std::string>>& rows);
std::string fixed6(double value);

}  // namespace riskbn::api
