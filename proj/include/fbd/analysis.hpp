#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fbd/fluctuations.hpp"
#include "fbd/heat.hpp"
#include "fbd/scheme.hpp"

namespace fbd {

/// One-sided derivative of p at xi from a quadratic least-squares fit over
/// the grid points with probe <= |x - xi| <= 2 probe, extrapolated to xi.
struct SlopePair {
    double left;
    double right;
    double jump() const { return right - left; }
};
SlopePair one_sided_slopes(const ProfileFn& p, double xi, double probe);

struct StefanSample {
    int n;
    double t;
    double xi_dot;      // centred difference of the interface over the window
    double slope_jump;  // right minus left derivative of p at xi
    double residual;    // |2 xi_dot + slope_jump|
};

/// Stefan-condition residual at the step index of t. Needs every state of
/// the run (Trajectory::states). Throws if the window leaves [0, N].
StefanSample stefan_residual(const Trajectory& traj, double t, double probe, int window = 10);

/// Slope jump of p at every stored state, for the smoothing-then-restoring
/// picture of the interface slope.
std::vector<StefanSample> slope_jump_history(const Trajectory& traj, double probe, int window = 10);

/// Mean Stefan residual over the moving phase: from the first LM step plus
/// half a window until half a window before the end. NaN if that is empty.
double moving_phase_residual(const Trajectory& traj, double probe, int window = 10);

struct FlowRuleViolation {
    int n;
    std::string kind;  // "standing-band", "moving-value", "monotonicity", "right-move"
    double magnitude;
};

/// Standing steps need p(xi) in [-1, 1], left moves p(xi) = 1, right moves
/// p(xi) = -1; xi must be non-increasing; right moves are always listed.
std::vector<FlowRuleViolation> flow_rule_check(const Trajectory& traj, double tol);

/// t^n of the first state produced by a left move; +inf if none.
double depinning_time(const Trajectory& traj);

/// Largest |(p^{n+1} - p^n)/dt - D_xx p^{n+1}| on grid points farther than
/// `collar` from both interface positions and from the domain ends.
double bulk_residual(const Trajectory& traj, int n, double collar);

/// A function of (t, x) such as the stage-4 essential fluctuation.
using FieldSampler = std::function<double(double, double)>;

struct HolderQuotients {
    double time;   // sup |f(t2,x) - f(t1,x)| / |t2 - t1|^gamma
    double space;  // sup |f(t,x2) - f(t,x1)| / sqrt|x2 - x1|
};

/// Empirical Hoelder quotients over `pairs` random pairs drawn from a
/// seeded mt19937_64 in [t_lo, t_hi] x [x_lo, x_hi].
HolderQuotients holder_quotient(const FieldSampler& f, double gamma, int pairs, std::uint64_t seed,
                                double t_lo, double t_hi, double x_lo, double x_hi);

struct KernelGapRow {
    int n;
    double sup_gap;        // sup |g^{*n} - h^{*n}|
    double normalized;     // eps n^{3/2} sup_gap
    double data_gap;       // sup |g^{*n} * q - heat(n eps², q)|, NaN without data
    double data_normalized;  // sqrt(n) / eps data_gap
};

/// Gap between iterated exponential and Gaussian kernels on a whole-line
/// grid of spacing eps/40 wide enough for the largest n. With data, the
/// iterated kernels are also applied to q and compared against heat_exact
/// within max(1, 20 eps) of its kinks.
std::vector<KernelGapRow> kernel_gap_study(const Epsilon& eps, const std::vector<int>& n_list,
                                           const std::optional<PiecewiseLinear>& data = {},
                                           double grid_divisor = 40.0);

struct LemmaA1Row {
    int n;
    double int_b;       // int B_n
    double int_b_s2;    // int s^{-2} B_n
};

/// B_n(s) = n |(1 + s²/n)^{-n} - e^{-s²}|, integrated over the real line.
double lemma_a1_integrand(int n, double s);
std::vector<LemmaA1Row> lemma_a1_integrals(const std::vector<int>& n_list);

/// log(e_a / e_b) / log(eps_a / eps_b) for consecutive entries.
std::vector<double> empirical_orders(const std::vector<double>& eps, const std::vector<double>& err);

}  // namespace fbd
