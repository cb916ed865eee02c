#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskbn/elicitation.hpp"
#include "riskbn/network.hpp"

namespace riskbn {

inline constexpr std::string_view kMissingMarker = "?";

// Case data: one column per node id, cells are state names or missing.
struct CaseTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<std::string>>> rows;
  std::string provenance;
};

// Header row of node ids, "?" marks a missing cell. Throws parse_error.
CaseTable parse_case_csv(std::string_view text);
std::string write_case_csv(const CaseTable& table);

struct EmConfig {
  int max_iterations = 200;
  double log_likelihood_tolerance = 1e-6;
  // Nodes without an entry get uniform alpha summing to default_row_total
  // per row.
  std::map<std::string, DirichletPrior> priors;
  double default_row_total = kDefaultRowAlphaTotal;
  std::uint64_t seed = 0;
  // Extra runs from jittered starting points; 0 = prior-mean start only.
  int restarts = 0;
};

struct EmResult {
  BayesNet net;
  int iterations = 0;
  // Entry k is evaluated at the parameters after k M-steps (entry 0 is the
  // starting point).
  std::vector<double> log_likelihood_trace;
  // log-likelihood + sum alpha * ln(theta); EM never decreases it.
  std::vector<double> objective_trace;
  bool converged = false;
};

// MAP-EM. The E-step takes expected family counts from exact posteriors; the
// M-step sets each row to (expected_count + alpha) / (row_total + sum alpha).
// Throws invalid_argument for bad config or empty data with zero-total
// priors, unknown_node / unknown_state for data that does not match the
// network, zero_probability_evidence naming the row of an impossible case.
EmResult em_fit(const BayesNet& net, const CaseTable& data, const EmConfig& cfg = {});

// Sum over cases of ln P(observed cells). Same errors as em_fit.
double log_likelihood(const BayesNet& net, const CaseTable& data);

// sum over rows and states of alpha * ln(theta), skipping alpha = 0.
double log_prior(const BayesNet& net, const std::map<std::string, DirichletPrior>& priors);

}  // namespace riskbn
