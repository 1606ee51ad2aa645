#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scatter1d::cli {

/// Exit codes shared by every subcommand:
///   0 success / all applicable identities pass
///   1 an applicable identity fails its tolerance
///   2 usage or file/parse errors
///   3 numerical failure (non-convergence, singularities, integrator limits)
inline constexpr int kExitOk = 0;
inline constexpr int kExitIdentityFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Runs `scan|check|find|design-cpa` with the given arguments (program name
/// excluded), writing to the supplied streams. Never throws; errors map to
/// the exit codes above.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// main() adapter.
int run(int argc, const char* const* argv);

}  // namespace scatter1d::cli
