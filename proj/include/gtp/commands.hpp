#pragma once

// The `gtp` subcommands as plain functions returning process exit codes.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace gtp {

enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_usage = 2 };

struct CommandOptions {
    std::string config_path;  // empty: defaults only
    std::string out;          // empty: run.output, else `out` stream
    unsigned jobs = 1;
    std::optional<std::uint64_t> seed;
};

/// Plays one game and writes its CSV. Requested run.checks are reported as
/// JSON lines; any failure gives exit_check_failed.
int simulate_command(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Runs a named suite and writes one JSON line per report.
int verify_command(const std::string& suite, const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Runs the sweep.* grid and writes one CSV row per cell in grid order.
int sweep_command(const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace gtp
