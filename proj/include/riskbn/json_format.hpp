#pragma once

#include <string>

#include <json.hpp>

namespace riskbn {

using Json = nlohmann::ordered_json;

// Shortest-free, fixed 17-significant-digit rendering of a double. Non-finite
// values render as null.
std::string format_number(double value);

// Canonical text: insertion-ordered keys, two-space indent, floats via
// format_number, trailing newline. Every JSON artifact the toolkit emits
// (files, CLI output, HTTP bodies) goes through this.
std::string to_canonical_json(const Json& value);

}  // namespace riskbn
