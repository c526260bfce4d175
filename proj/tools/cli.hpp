#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace painleve::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDomain = 1;
inline constexpr int kUsage = 2;
inline constexpr int kNumerical = 3;

// Runs one subcommand. args excludes the program name. Results go to out
// (or the files named by --out and friends), diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Sweep thread count: the requested value (0 = hardware), capped by
// PAINLEVE_THREADS when set.
unsigned resolve_threads(unsigned requested);

}  // namespace painleve::cli
