#pragma once

namespace nslab {

/// Entry point behind the binary: subcommands run, sweep, verify,
/// check-profile, convergence. Exit codes: 0 success, 1 verification
/// violation, 2 configuration/usage error, 3 assumption hard-reject,
/// 4 solver abort, 5 numerical failure.
int cli_main(int argc, const char* const* argv);

} // namespace nslab
