#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fbd/analysis.hpp"
#include "fbd/config.hpp"
#include "fbd/fluctuations.hpp"
#include "fbd/io.hpp"

namespace fbd {

/// A run together with the ledger that followed it.
struct Experiment {
    ExperimentConfig cfg;
    Trajectory traj;
    FluctuationLedger ledger;
};

struct ExperimentOptions {
    bool keep_all_states = true;
    std::set<int> ledger_frames;  // empty keeps every frame
    bool step_diagnostics = true;
};

Experiment run_experiment(const ExperimentConfig& cfg, const ExperimentOptions& opts = {});

/// Flow-rule tolerance used for a backend: 1e-6 analytic, 10 h finite differences.
double flow_tolerance(const ExperimentConfig& cfg);

/// Time inside the step that holds t, halfway to the next one; stages 3 and
/// 4 of the split coincide with stage 2 exactly at t^n, so the split is
/// sampled between steps.
double mid_step_time(double t, double dt);

struct MemberReport {
    double eps2 = 0.0;
    double eps = 0.0;
    std::optional<std::string> error;
    double depinning_time = NAN;
    int flow_violations = 0;
    double flow_worst = 0.0;
    int right_moves = 0;
    double max_speed_ratio = 0.0;  // max shift / ((alpha/2) eps²)
    double max_mass_error = 0.0;   // max |int r - 2 shift| over moving steps
    double lemma_ratio = NAN;      // max sup|r - r_ess|/r_ess over moving steps, divided by eps
    double decomposition_error = 0.0;
    double q_error = NAN;          // sup |q - heat_exact| at compare_time
    double stefan_moving = NAN;    // mean Stefan residual over the moving phase
    StefanSample stefan_at{0, 0.0, NAN, NAN, NAN};
    double split_time = NAN;       // mid-step time used for the split
    std::array<double, 4> neg_sup{NAN, NAN, NAN, NAN};
    double ess4_sup = NAN;
    double ess4_dx_l2 = NAN;
    HolderQuotients holder{NAN, NAN};
    double slope_dip = NAN;        // smallest slope jump of p at xi
    double slope_dip_time = NAN;
    double slope_recovery = NAN;   // largest slope jump after the dip
    double slope_recovery_time = NAN;
};

struct DiagnosticsReport {
    std::uint64_t seed = 0;
    double gamma = 0.25;
    std::string backend;
    std::vector<MemberReport> members;
    std::vector<double> xi_distance;  // consecutive pairs
    std::vector<double> p_distance;
    bool xi_cauchy = false;
    bool p_cauchy = false;
    std::vector<double> q_orders;
    std::vector<double> stefan_orders;
    std::array<std::vector<double>, 4> neg_factors;  // err(eps_i) / err(eps_{i+1})
    bool failed() const;
};

/// Runs the experiment for every eps² in cfg.sweep_eps2 (in parallel) and
/// compares consecutive members on the coarsest member's time levels.
DiagnosticsReport converge_sweep(const ExperimentConfig& cfg);

/// Single-member diagnostics; fills every MemberReport field it can.
MemberReport member_diagnostics(const Experiment& ex);

Json to_json(const MemberReport& m);
Json to_json(const DiagnosticsReport& r);
std::string to_text(const DiagnosticsReport& r);

}  // namespace fbd
