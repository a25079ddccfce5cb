#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gmon {

// Exit codes of run_command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

// Subcommands: gen-pool, calibrate, arl0, arl1, monitor. `args` excludes the
// program name. Reports go to `out`; diagnostics, usage text and monitor's
// per-tick G_t log go to `err`. Monitor prints "ALARM t=<tick>" on `out`.
// Monitor reads from --input, or from `in` when none is given.
int run_command(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
                std::ostream& err);

}  // namespace gmon
