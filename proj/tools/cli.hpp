#ifndef EBSR_TOOLS_CLI_HPP
#define EBSR_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ebsr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name) and returns the exit
/// status. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

} // namespace ebsr::cli

#endif // EBSR_TOOLS_CLI_HPP
