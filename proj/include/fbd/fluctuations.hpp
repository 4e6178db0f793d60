#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "fbd/heat.hpp"
#include "fbd/kernels.hpp"
#include "fbd/scheme.hpp"
#include "fbd/state.hpp"

namespace fbd {

/// Local fluctuation left behind when the interface jumps from xi_old to
/// xi_new <= xi_old: g * sgn(. - xi_new) - g * sgn(. - xi_old).
double local_fluct_value(const Epsilon& eps, double xi_old, double xi_new, double x);

/// Its surrogate: 2 (xi_old - xi_new) g(x - midpoint), peak (xi_old - xi_new) / eps.
double local_fluct_ess_value(const Epsilon& eps, double xi_old, double xi_new, double x);

/// Grid samples with a continuous tracked node at xi_new. Throws if
/// xi_new > xi_old.
ProfileFn local_fluct(const Epsilon& eps, double xi_old, double xi_new, const Domain& grid);
ProfileFn local_fluct_ess(const Epsilon& eps, double xi_old, double xi_new, const Domain& grid);

/// Whole-line integrals by adaptive Gauss-Kronrod quadrature, split at the
/// kinks of each profile.
double local_fluct_mass(const Epsilon& eps, double xi_old, double xi_new, double tol = 1e-13);
double local_fluct_ess_mass(const Epsilon& eps, double xi_old, double xi_new, double tol = 1e-13);

/// sup_x |r - r_ess| / r_ess, sampled densely around the shift (the ratio is
/// constant in x outside a few kernel widths).
double local_fluct_ratio(const Epsilon& eps, double xi_old, double xi_new);

/// q <- g * q; kept as a named step because it is the scheme's regular part.
ProfileFn regular_part_step(const Epsilon& eps, const ProfileFn& q,
                            std::optional<double> node = {});

struct FluctStep {
    int n;            // step n -> n+1
    double xi_old;
    double xi_new;
    double mass_r;    // quadrature of r^n
    double mass_ess;  // quadrature of r_ess^n
    double ratio;     // sup |r - r_ess| / r_ess, NaN for a standing step
};

/// Profiles at one step index; every profile shares the grid and a tracked
/// node at xi^n so pointwise identities hold node by node.
struct LedgerFrame {
    int n;
    ProfileFn p;
    ProfileFn q;
    ProfileFn f;
    ProfileFn f_ess1;
};

struct LedgerOptions {
    /// Step indices whose frames are stored; empty stores all of them.
    std::set<int> frames;
    /// Compute quadrature masses and Lemma-type ratios per moving step.
    bool step_diagnostics = true;
};

/// Follows a run step by step, advancing q^{n+1} = g * q^n, f^{n+1} =
/// g * f^n + r^n and the first essential part e^{n+1} = g * e^n + r_ess^n
/// with the same convolution backend as the scheme.
class FluctuationLedger {
public:
    FluctuationLedger(const Epsilon& eps, const SimState& init, LedgerOptions opts = {});

    /// Observer hook for fbd::run.
    void observe(const SimState& prev, const StepOutcome& out);

    const Epsilon& eps() const { return eps_; }
    const std::vector<FluctStep>& steps() const { return steps_; }
    /// xi^0, xi^1, ... as seen so far.
    const std::vector<double>& xi_history() const { return xis_; }
    const std::map<int, LedgerFrame>& frames() const { return frames_; }
    const LedgerFrame& current() const { return current_; }

private:
    void store(const LedgerFrame& frame);

    Epsilon eps_;
    LedgerOptions opts_;
    std::vector<FluctStep> steps_;
    std::vector<double> xis_;
    std::map<int, LedgerFrame> frames_;
    LedgerFrame current_;
};

/// The essential sums of stages 2 to 4 at time t (step index n = last t^n <= t)
/// evaluated at a point, given xi^0 .. xi^{n+1}.
struct EssentialSums {
    double ess2;
    double ess3;
    double ess4;
};
EssentialSums essential_sums(const Epsilon& eps, const std::vector<double>& xis, double t, double x);

/// Stage-4 essential fluctuation at arbitrary (t, x); continuous in t.
double f_ess4_value(const Epsilon& eps, const std::vector<double>& xis, double t, double x);

struct FluctuationSplit {
    int n;
    double t;
    ProfileFn f;
    std::vector<ProfileFn> ess;  // ess1 .. ess4
    std::vector<ProfileFn> neg;  // neg1 .. neg4
};

/// Four-stage split of f at time t: neg1 = f - ess1, neg_{i+1} = ess_i -
/// ess_{i+1}, so that f = ess4 + sum neg_i. Needs the frame at the step
/// index of t and the interface history one step beyond it.
FluctuationSplit split_fluctuations(const FluctuationLedger& ledger, double t);

/// f^n rebuilt from scratch as sum_i g^{n-i} * r^{i-1}; an O(n²) oracle for
/// the incremental accumulation.
ProfileFn direct_duhamel(const Epsilon& eps, const std::vector<double>& xis, int n,
                         const Domain& grid);

}  // namespace fbd
