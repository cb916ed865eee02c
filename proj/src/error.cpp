#include "riskbn/error.hpp"

namespace riskbn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::validation_failed: return "validation_failed";
    case ErrorCode::cycle: return "cycle";
    case ErrorCode::unknown_node: return "unknown_node";
    case ErrorCode::unknown_state: return "unknown_state";
    case ErrorCode::invalid_evidence: return "invalid_evidence";
    case ErrorCode::zero_probability_evidence: return "zero_probability_evidence";
    case ErrorCode::not_threshold_node: return "not_threshold_node";
    case ErrorCode::cap_exceeded: return "cap_exceeded";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::no_network: return "no_network";
  }
  return "unknown";
}

}  // namespace riskbn
