#pragma once

#include <iosfwd>

namespace soundclust {

// Exit codes: 0 success, 1 data/runtime error, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Entry point for the `soundclust` tool: cluster | eval | fit | serve.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace soundclust
