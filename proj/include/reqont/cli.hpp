#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace reqont {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;  // violations, unknown factor, failed check
inline constexpr int kExitUsage = 2;   // bad arguments, I/O or parse failure

/// Runs `reqont <args...>` (without the program name) writing to the given
/// streams; returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reqont
