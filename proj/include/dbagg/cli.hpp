#pragma once

#include <ostream>

namespace dbagg {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCounterexample = 1;
inline constexpr int kExitConfigError = 2;

/// Entry point of the `dbagg` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dbagg
