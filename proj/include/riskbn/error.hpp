#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace riskbn {

// Machine-readable failure categories. The string forms are part of the
// CLI and HTTP contracts.
enum class ErrorCode {
  parse_error,
  validation_failed,
  cycle,
  unknown_node,
  unknown_state,
  invalid_evidence,
  zero_probability_evidence,
  not_threshold_node,
  cap_exceeded,
  invalid_argument,
  no_network,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace riskbn
