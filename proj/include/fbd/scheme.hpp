#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbd/kernels.hpp"
#include "fbd/state.hpp"

namespace fbd {

/// No level crossing inside the sampled window.
class DomainExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// LM above 1, RM below -1, ST on the closed band [-1, 1]. Throws on NaN.
Mode classify(double u_tilde_at_xi);

/// Level crossing selected by the scheme: for LM the largest x < xi_old with
/// u_tilde(x) = 1, for RM the smallest x > xi_old with u_tilde(x) = -1.
///
/// Grid points of `domain` are scanned outward from xi_old and the first
/// bracketing cell is bisected until its width is below `tol`. The returned
/// point lies on the phase side of the bracket (u_tilde <= 1 for LM,
/// u_tilde >= -1 for RM), so the new one-sided limits keep their signs.
double find_new_interface(const std::function<double(double)>& u_tilde, const Domain& domain,
                          double xi_old, Mode mode, double tol);

struct StepOutcome {
    SimState next;
    Mode mode = Mode::ST;
    double u_tilde_at_xi = 0.0;
    double xi_shift = 0.0;       // |xi_new - xi_old|
    double root_residual = 0.0;  // |u_tilde(xi_new) -+ 1| for moving steps
    bool widened = false;        // whole-line window was extended to find the root
};

struct StepOptions {
    double root_tol = -1.0;  // bracket width; negative selects 1e-12 * domain width
};

/// One step: convolve, classify, relocate the interface and rebuild
/// u = u_tilde + s(. - xi_new) with limits u_tilde(xi_new) -+ 1.
StepOutcome step(const SimState& state, const Epsilon& eps, const StepOptions& opts = {});

struct StepRecord {
    double t;
    double xi;
    Mode mode;            // mode of the step that produced this state (None at n = 0)
    double p_at_xi;       // p^n(xi^n)
    double u_tilde_at_xi; // value that drove the classification (NaN at n = 0)
    double jump;          // right - left limit of u^n at xi^n
    double root_residual;
};

struct Trajectory {
    double dt = 0.0;
    std::vector<StepRecord> steps;      // index n = 0..N
    std::map<int, ProfileFn> snapshots; // keyed by step index
    std::vector<SimState> states;       // every state when requested, else empty
    std::optional<std::string> error;   // set when the run stopped early

    std::vector<double> times() const;
    std::vector<double> xis() const;
};

struct RunOptions {
    bool keep_all_states = false;
    StepOptions step;
    /// Called after every successful step with the state before it.
    std::function<void(const SimState&, const StepOutcome&)> observer;
};

/// Step index of the snapshot for a requested time: the last t^n <= t.
int snap_index(double t, double dt);

/// Marches N = floor(T/eps²) steps. Solver errors end the march early and
/// are recorded in Trajectory::error rather than thrown.
Trajectory run(const SimState& init, const Epsilon& eps, double t_final,
               const std::vector<double>& snapshot_times, const RunOptions& opts = {});

}  // namespace fbd
