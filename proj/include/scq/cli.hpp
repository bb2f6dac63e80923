#pragma once

#include <iosfwd>

#include "scq/config.hpp"

namespace scq::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

/// Executes a parsed configuration. Data goes to `out` unless the config
/// names an output path; diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Command-line entry point: `run CONFIG` or one of the subcommands
/// simulate, design, drive-run, lyapunov with flags.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace scq::cli
