#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace concordia::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

/// Default seed when neither --seed nor CONCORDIA_SEED is given.
inline constexpr unsigned long long kDefaultSeed = 20240917ULL;

/// Run the command line `args` (args[0] is the program name). Results go to
/// `out` only when the command succeeds; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace concordia::cli
