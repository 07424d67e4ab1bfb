#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace linepack::cli {

/// Exit codes: 0 success (including non-converged runs, which are reported in
/// the payload), 1 failed check (gradcheck), 2 usage or input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `linepack` tool. Subcommands: optimize, sweep,
/// pipeline, gradcheck, reference, metrics, compare.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace linepack::cli
