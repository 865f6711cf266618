#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace discordlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitInput = 2;

/// Runs one command line (without the program name). Artifacts go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace discordlab::cli
