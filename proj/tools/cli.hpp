#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ffgeom::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_assertion = 1;
inline constexpr int exit_config = 2;

/// Runs one command line (without the program name). Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ffgeom::cli
