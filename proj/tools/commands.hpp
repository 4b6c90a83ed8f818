#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace solitonlab::cli {

inline constexpr const char* kVersion = "0.1.0";

// args excludes the program name. Returns the process exit code:
// 0 ok, 2 mathematically infeasible, 1 input error or failed check.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace solitonlab::cli
