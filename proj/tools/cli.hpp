#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plap::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_solver_failure = 1;
inline constexpr int exit_bad_arguments = 2;

/// Runs `plap <solve|sweep|table> [flags]`. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plap::cli
