#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qnet {

// Command-line entry point, separated from main() so tests can drive it
// in-process. args excludes the program name.
//
// Exit codes: 0 success, 1 invariant failure, 2 parse/validation error,
// 3 singular loop / divergent path sum.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qnet
