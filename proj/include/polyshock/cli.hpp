#pragma once

#include <string>

#include "polyshock/config.hpp"

namespace polyshock {

struct CliOptions {
    std::string out_dir = ".";
    bool expect_breakdown = false;
    std::string points_path;  // oracle query points, CSV "x,t"
};

/// Dispatch one subcommand; returns the process exit status (0 = all checks
/// passed). Commands: solve, oracle, crosscheck, ensemble, verify-h1,
/// verify-h2, report.
int run_command(const std::string& command, const RunConfig& cfg, const CliOptions& opt);

}  // namespace polyshock
