#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace riskbn {

// Runs one CLI invocation. `args` excludes the program name. Returns the
// exit code: 0 success, 1 contract error (code on `err`), 2 usage error.
// RISKBN_FORMAT sets the default output format.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace riskbn
