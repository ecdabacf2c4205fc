#pragma once

#include <ostream>

namespace radsol {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitSuccess = 0,
    kExitIo = 1,
    kExitConfig = 2,
    /// `check` ran but at least one hypothesis failed.
    kExitCheckFailed = 3,
};

/// Entry point of the `radsol` tool: subcommands check, solve, scan,
/// hylomorphy and rearrange.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace radsol
