#pragma once

#include <ostream>
#include <string>

#include "fbd/config.hpp"

namespace fbd {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,     // unreadable or invalid configuration, bad usage
    kExitStrict = 2,     // --strict and the initial state is not admissible
    kExitSolver = 3,     // the scheme could not complete a step
    kExitSweepMember = 4 // at least one sweep member failed; partial report written
};

/// Output files land in `out_dir` (created if missing). Progress and error
/// messages go to `log`. None of these throw for run-time failures; they map
/// them onto an ExitCode.
int cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_decompose(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_kernelcheck(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);

}  // namespace fbd
