#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "riskbn/json_format.hpp"
#include "riskbn/network.hpp"

namespace riskbn {

struct ParsedNetwork {
  BayesNet net;
  // Rows renormalized because their sum was off by more than the
  // normalization tolerance but within the renormalization tolerance.
  std::vector<std::string> warnings;
};

// Schema-level parse only: strict keys, types, and state/parent resolution
// are left to validate_network. Throws Error(parse_error) with a line or JSON
// path in the message.
ParsedNetwork parse_network(std::string_view text);
ParsedNetwork network_from_json(const Json& doc);

// parse_network followed by require_valid.
BayesNet load_network(std::string_view text, std::vector<std::string>* warnings = nullptr);
BayesNet load_network_file(const std::string& path, std::vector<std::string>* warnings = nullptr);

Json network_to_json(const BayesNet& net);
// Canonical bytes: fixed key order, declaration-ordered nodes, 17 significant
// digits.
std::string save_network(const BayesNet& net);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace riskbn
