#pragma once

#include <map>
#include <string>
#include <vector>

#include "riskbn/analysis.hpp"
#include "riskbn/elicitation.hpp"
#include "riskbn/network.hpp"

namespace riskbn {

// The AI-augmented phishing case-study network: eight nodes from tool
// availability and linguistic mastery through targeting, automation and
// volume to the employee outcome and the TTP-shift threshold. Rows anchored
// to published measurements carry PAPER provenance; every other row is
// authored under the monotonicity constraint and tagged ELICITED.
BayesNet build_bundled_model();

// baseline, mass-spear, hardened-defense, gtg-style-autonomy.
ScenarioSet bundled_scenarios();

// Evidence records shipped with the model (volume growth, click-through and
// detection measurements).
std::vector<EvidenceRecord> bundled_ledger();

// Per node: true when later states are more adverse, false when earlier
// states are (e.g. weak filtering is worse than strong).
std::map<std::string, bool> bundled_adverse_direction();

// Exhaustive first-order stochastic dominance check: moving any single parent
// one step toward its adverse state must not decrease P(child at least as
// adverse as s) for any s. Returns one message per failure.
std::vector<std::string> monotone_audit(const BayesNet& net, const std::map<std::string, bool>& adverse_ascending);

}  // namespace riskbn
