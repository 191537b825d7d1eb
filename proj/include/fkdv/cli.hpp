#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

namespace fkdv::cli {

struct Tolerances {
    double newton_tol = 1e-11;      // Newton residual acceptance
    double limit_tol = 1e-8;        // period-escalation window diffs
    double constraint_tol = 1e-6;   // diagnostic identity / bound gates
};

struct RunConfig {
    double s = 2.0;
    std::vector<double> lambda_list;        // relative heights, each in (0,1]
    double P0 = 2.0 * M_PI;                 // periodic domain, escalation start
    int N = 1024;                           // grid points (even)
    double escalation_cap = 256.0 * M_PI;   // largest period attempted
    Tolerances tolerances;
    std::filesystem::path output_dir = ".";
    long seed = 0;                          // recorded for reproducibility

    // Throws std::invalid_argument; lambda_list may be empty (the solve-style
    // commands reject that themselves).
    void validate() const;
};

// Subcommand drivers. Each returns a process exit code: 0 all checks passed,
// 2 a numerical check or solve failed. Configuration errors throw
// std::invalid_argument, which run_cli maps to exit code 1.
int cmd_kernel(const RunConfig& cfg);
int cmd_solve(const RunConfig& cfg);
int cmd_continue(const RunConfig& cfg);
int cmd_solitary(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg, const std::vector<std::string>& files);

// Full argv entry point: parses flags (and an optional key=value config
// file; flags win), dispatches the subcommand, maps exceptions to the exit
// discipline 0/1/2.
int run_cli(int argc, const char* const* argv);

}  // namespace fkdv::cli
