#pragma once

namespace hrlnav::cli {

/// Parse and dispatch: train, eval, plot, bench, inspect-checkpoint.
/// Exit codes: 0 success, 2 configuration/usage error, 3 runtime or
/// numeric error, 4 file IO or format error.
int run_cli(int argc, const char* const* argv);

}  // namespace hrlnav::cli
