#include "fbd/scheme.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace fbd {

Mode classify(double u_tilde_at_xi) {
    if (std::isnan(u_tilde_at_xi)) throw std::invalid_argument("classify: NaN interface value");
    if (u_tilde_at_xi > kPUpper) return Mode::LM;
    if (u_tilde_at_xi < kPLower) return Mode::RM;
    return Mode::ST;
}

namespace {

/// Largest y < start with fn(y) <= 1, scanning the given descending points.
double descend_to_level(const std::function<double(double)>& fn, const std::vector<double>& pts,
                        double start, double tol) {
    double hi = start;
    for (double lo : pts) {
        if (fn(lo) <= 1.0) {
            while (hi - lo > tol) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                if (fn(mid) <= 1.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return lo;
        }
        hi = lo;
    }
    throw DomainExhausted("no level crossing inside the grid window");
}

// Interface values are rounded to a multiple of 2^-50 so that both limits
// v - 1 and v + 1 are exact and their difference is exactly 2.
double quantize(double v) {
    if (std::abs(v) >= 4.0) return v;
    constexpr double scale = 1125899906842624.0;  // 2^50
    return std::round(v * scale) / scale;
}

}  // namespace

double find_new_interface(const std::function<double(double)>& u_tilde, const Domain& domain,
                          double xi_old, Mode mode, double tol) {
    if (mode != Mode::LM && mode != Mode::RM) {
        throw std::invalid_argument("find_new_interface needs a moving mode");
    }
    std::vector<double> pts;
    if (mode == Mode::LM) {
        for (std::size_t j = domain.size(); j-- > 0;) {
            if (domain.x(j) < xi_old) pts.push_back(domain.x(j));
        }
        return descend_to_level(u_tilde, pts, xi_old, tol);
    }
    // mirror x -> 2 xi - x, u -> -u turns the RM search into an LM search
    for (std::size_t j = 0; j < domain.size(); ++j) {
        if (domain.x(j) > xi_old) pts.push_back(2.0 * xi_old - domain.x(j));
    }
    auto mirrored = [&](double y) { return -u_tilde(2.0 * xi_old - y); };
    return 2.0 * xi_old - descend_to_level(mirrored, pts, xi_old, tol);
}

StepOutcome step(const SimState& state, const Epsilon& eps, const StepOptions& opts) {
    SimState cur = state;
    bool widened = false;
    for (int attempt = 0;; ++attempt) {
        const Domain& dom = cur.u.domain();
        const double tol = opts.root_tol > 0.0 ? opts.root_tol : 1e-12 * dom.width();
        Smoothed ut(eps, cur.u);
        const double at_xi = ut(cur.xi);
        const Mode mode = classify(at_xi);
        double xi_new = cur.xi;
        if (mode != Mode::ST) {
            try {
                xi_new = find_new_interface(ut, dom, cur.xi, mode, tol);
            } catch (const DomainExhausted&) {
                if (!dom.is_whole_line() || attempt > 0) {
                    std::ostringstream msg;
                    msg << "no " << (mode == Mode::LM ? "u~ = 1" : "u~ = -1") << " crossing "
                        << (mode == Mode::LM ? "left" : "right") << " of xi = " << cur.xi
                        << " inside [" << dom.left() << ", " << dom.right() << "]";
                    throw DomainExhausted(msg.str());
                }
                const double w = dom.width();
                cur.u = mode == Mode::LM ? cur.u.extended(w, 0.0) : cur.u.extended(0.0, w);
                widened = true;
                continue;
            }
        }
        const double v = quantize(ut(xi_new));
        ProfileFn smooth = ut.resample();
        std::vector<double> s = smooth.samples();
        for (std::size_t j = 0; j < s.size(); ++j) s[j] += eval_s(eps, dom.x(j) - xi_new);
        double residual = 0.0;
        if (mode == Mode::LM) residual = std::abs(v - 1.0);
        if (mode == Mode::RM) residual = std::abs(v + 1.0);
        // a root within snapping distance of a node moves onto it
        ProfileFn next(dom, std::move(s), Interface{xi_new, v - 1.0, v + 1.0});
        xi_new = next.tracked()->pos;
        return StepOutcome{SimState{std::move(next), xi_new, cur.n + 1, cur.alpha, mode},
                           mode, at_xi, std::abs(cur.xi - xi_new), residual, widened};
    }
}

std::vector<double> Trajectory::times() const {
    std::vector<double> t;
    t.reserve(steps.size());
    for (const auto& s : steps) t.push_back(s.t);
    return t;
}

std::vector<double> Trajectory::xis() const {
    std::vector<double> x;
    x.reserve(steps.size());
    for (const auto& s : steps) x.push_back(s.xi);
    return x;
}

int snap_index(double t, double dt) { return static_cast<int>(std::floor(t / dt + 1e-9)); }

namespace {

StepRecord record_of(const SimState& s, double dt, Mode mode, double u_tilde, double residual) {
    const auto& tr = s.u.tracked();
    const double left = tr ? tr->left : s.u(s.xi);
    const double right = tr ? tr->right : s.u.right_value(s.xi);
    return StepRecord{s.n * dt, s.xi,  mode, 0.5 * ((left + 1.0) + (right - 1.0)),
                      u_tilde,  right - left, residual};
}

}  // namespace

Trajectory run(const SimState& init, const Epsilon& eps, double t_final,
               const std::vector<double>& snapshot_times, const RunOptions& opts) {
    const double dt = eps.dt();
    if (dt > t_final * (1.0 + 1e-12)) {
        throw std::invalid_argument("time step eps^2 exceeds the final time");
    }
    const int steps = snap_index(t_final, dt);
    std::map<int, bool> wanted;
    for (double t : snapshot_times) {
        if (t < 0.0 || t > t_final * (1.0 + 1e-12)) {
            throw std::invalid_argument("snapshot time outside [0, T]");
        }
        wanted[snap_index(t, dt)] = true;
    }
    Trajectory traj;
    traj.dt = dt;
    SimState cur = init;
    traj.steps.push_back(record_of(cur, dt, Mode::None, NAN, 0.0));
    if (wanted.count(cur.n)) traj.snapshots.emplace(cur.n, cur.u);
    if (opts.keep_all_states) traj.states.push_back(cur);
    for (int k = 0; k < steps; ++k) {
        std::optional<StepOutcome> attempt;
        try {
            attempt.emplace(step(cur, eps, opts.step));
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "step " << cur.n << " -> " << cur.n + 1 << ": " << e.what();
            traj.error = msg.str();
            break;
        }
        StepOutcome& out = *attempt;
        if (opts.observer) opts.observer(cur, out);
        cur = std::move(out.next);
        traj.steps.push_back(
            record_of(cur, dt, out.mode, out.u_tilde_at_xi, out.root_residual));
        if (wanted.count(cur.n)) traj.snapshots.emplace(cur.n, cur.u);
        if (opts.keep_all_states) traj.states.push_back(cur);
    }
    return traj;
}

}  // namespace fbd
