// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "fbd/analysis.hpp"
#include "fbd/config.hpp"
#include "fbd/fluctuations.hpp"
#include "fbd/sweep.hpp"

using namespace fbd;

namespace {

// Frozen from the finest reference sweep member (eps² = 0.0025): the slope
// jump of p at the interface dips to about 0.49 and recovers to about 1.31.
constexpr double kSlopeDipBelow = 1.0;
constexpr double kSlopeRecoveryAbove = 1.2;

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("criterion %2d %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string list(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt("%.4g", v[i]);
    return s + "]";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig whole_line_reference() {
    ExperimentConfig cfg = preset_reference();
    cfg.backend = DomainKind::WholeLine;
    return cfg;
}

// Shift of one step starting from the speed-bounding majorant.
double barrier_shift(double e, double alpha) {
    const Domain d = Domain::whole_line(-1.0, 1.0, e / 20.0);
    ProfileFn u = ProfileFn::sample(d, [&](double x) { return x <= 0.0 ? 0.0 : alpha * x + 2.0; },
                                    Interface{0.0, 0.0, 2.0});
    return step(SimState{std::move(u), 0.0, 0, alpha, Mode::None}, Epsilon(e)).xi_shift;
}

}  // namespace

int main() {
    const ExperimentConfig preset = preset_reference();
    const ExperimentConfig whole = whole_line_reference();
    const double alpha = preset.alpha();

    // 1. depinning time and runtime of the plain reference run
    const auto t0 = std::chrono::steady_clock::now();
    const Trajectory plain = run(preset.initial_state(), preset.eps(), preset.t_final, preset.snapshot_times, {});
    const double runtime = seconds_since(t0);
    const double t_dep = depinning_time(plain);
    report(1, !plain.error && t_dep >= 0.04 && t_dep <= 0.06 && runtime < 60.0,
           fmt("first left move at t = %.4g", t_dep) + fmt(", run took %.2f s", runtime));

    const Experiment fd = run_experiment(preset);
    const Experiment wl = run_experiment(whole);

    // 2. jump invariant on every step, both backends
    double jump_fd = 0.0;
    double jump_wl = 0.0;
    for (const auto& s : fd.traj.steps) jump_fd = std::max(jump_fd, std::abs(s.jump - 2.0));
    for (const auto& s : wl.traj.steps) jump_wl = std::max(jump_wl, std::abs(s.jump - 2.0));
    report(2, jump_wl == 0.0 && jump_fd <= 10.0 * preset.h,
           fmt("max |jump - 2|: analytic %.3g", jump_wl) + fmt(", fd %.3g", jump_fd));

    // 3. speed bound on the reference run and the closed-form barrier shift
    double worst_ratio = 0.0;
    bool ordered = true;
    for (const Experiment* ex : {&fd, &wl}) {
        const auto& st = ex->traj.steps;
        for (std::size_t i = 1; i < st.size(); ++i) {
            const double shift = st[i - 1].xi - st[i].xi;
            ordered = ordered && shift >= 0.0;
            worst_ratio = std::max(worst_ratio, shift / (0.5 * alpha * ex->traj.dt));
        }
    }
    double barrier_err = 0.0;
    for (double e : {0.1, 0.05, 0.025}) {
        barrier_err = std::max(barrier_err, std::abs(barrier_shift(e, alpha) - e * std::log1p(0.5 * alpha * e)));
    }
    report(3, ordered && worst_ratio <= 1.0 && barrier_err <= 1e-10,
           fmt("alpha = %.3g", alpha) + fmt(", max shift / bound = %.3g", worst_ratio) +
               fmt(", barrier shift error %.2e", barrier_err));

    // 4. flow rule
    const auto v_fd = flow_rule_check(fd.traj, flow_tolerance(preset));
    const auto v_wl = flow_rule_check(wl.traj, flow_tolerance(whole));
    report(4, v_fd.empty() && v_wl.empty() && !fd.traj.error && !wl.traj.error,
           "violations: fd " + std::to_string(v_fd.size()) + " (tol 10h), analytic " +
               std::to_string(v_wl.size()) + " (tol 1e-6)");

    // 5. decomposition identity at five times, analytic backend
    double dec = 0.0;
    int sampled = 0;
    for (double t : whole.decompose_times) {
        const auto it = wl.ledger.frames().find(snap_index(t, whole.eps2));
        if (it == wl.ledger.frames().end()) continue;
        const LedgerFrame& fr = it->second;
        dec = std::max(dec, sup_norm(combine(1.0, fr.p, -1.0, combine(1.0, fr.q, -1.0, fr.f))));
        ++sampled;
    }
    report(5, sampled == 5 && dec <= 1e-8, fmt("max |p - (q - f)| = %.3g", dec) + " over " +
                                               std::to_string(sampled) + " times");

    // 6. fluctuation mass per moving step
    double mass = 0.0;
    int moving = 0;
    for (const Experiment* ex : {&fd, &wl}) {
        for (const auto& s : ex->ledger.steps()) {
            if (s.xi_new == s.xi_old) continue;
            mass = std::max(mass, std::abs(s.mass_r - 2.0 * (s.xi_old - s.xi_new)));
            ++moving;
        }
    }
    report(6, moving > 0 && mass <= 1e-8,
           fmt("max |int r - 2 shift| = %.3g", mass) + " over " + std::to_string(moving) + " moving steps");

    // 7. surrogate error / eps on a constant-speed interface
    std::vector<double> scaled;
    for (double e : {0.1, 0.05, 0.025}) {
        const Epsilon eps(e);
        const double speed = 0.6;
        double worst = 0.0;
        for (int n = 0; n < 8; ++n) {
            const double xo = -speed * n * e * e;
            worst = std::max(worst, local_fluct_ratio(eps, xo, xo - speed * e * e));
        }
        scaled.push_back(worst / e);
    }
    const double spread7 = *std::max_element(scaled.begin(), scaled.end()) /
                           *std::min_element(scaled.begin(), scaled.end());
    report(7, spread7 <= 2.0, "sup ratio / eps = " + list(scaled) + fmt(", max/min %.3g", spread7));

    // sweeps: analytic for the regular part, reference (fd) for everything else
    const auto t_sweep = std::chrono::steady_clock::now();
    const DiagnosticsReport rep_wl = converge_sweep(whole);
    const DiagnosticsReport rep = converge_sweep(preset);
    const double sweep_time = seconds_since(t_sweep);

    // 8. q_eps against the exact heat flow
    {
        std::vector<double> err;
        for (const auto& m : rep_wl.members) err.push_back(m.q_error);
        const double worst = rep_wl.q_orders.empty() ? NAN : *std::min_element(rep_wl.q_orders.begin(), rep_wl.q_orders.end());
        report(8, !rep_wl.failed() && worst >= 0.8,
               "analytic, t = 0.1: sup errors " + list(err) + ", orders " + list(rep_wl.q_orders));
    }

    // 9. negligible parts shrink when eps is halved (eps² 0.01 -> 0.0025)
    {
        const auto& a = rep.members.front();
        const auto& b = rep.members.back();
        std::vector<double> factor;
        bool ok = !rep.failed() && std::abs(b.eps - 0.5 * a.eps) < 1e-12;
        for (int i = 0; i < 4; ++i) {
            factor.push_back(a.neg_sup[i] / b.neg_sup[i]);
            ok = ok && factor.back() >= 1.6;
        }
        report(9, ok, fmt("split at t = %.4g", a.split_time) + ", sup factors neg1..4 = " + list(factor));
    }

    // 10. Hoelder quotients of the stage-4 essential part
    {
        std::vector<double> qt;
        std::vector<double> qx;
        for (const auto& m : rep.members) {
            qt.push_back(m.holder.time);
            qx.push_back(m.holder.space);
        }
        auto spread = [](const std::vector<double>& v) {
            return (*std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end())) /
                   *std::min_element(v.begin(), v.end());
        };
        const double st = spread(qt);
        const double sx = spread(qx);
        report(10, !rep.failed() && st < 0.5 && sx < 0.5,
               fmt("gamma = %.2g", preset.gamma) + ": time " + list(qt) + fmt(" (spread %.1f%%)", 100 * st) +
                   ", space " + list(qx) + fmt(" (spread %.1f%%)", 100 * sx));
    }

    // 11. kernel gap and B_n integrals
    {
        const auto tk = std::chrono::steady_clock::now();
        const auto rows = kernel_gap_study(Epsilon(preset.kc_eps), preset.kc_n_list, preset.p_ini());
        const auto a1 = lemma_a1_integrals(preset.a1_n_list);
        const double kt = seconds_since(tk);
        std::vector<double> norm;
        double at16 = NAN;
        for (const auto& r : rows) {
            norm.push_back(r.normalized);
            if (r.n == 16) at16 = r.normalized;
        }
        const double peak = *std::max_element(norm.begin(), norm.end());
        // bounded: finite and positive, and no growth past n = 10
        std::vector<double> ib;
        std::vector<double> ib2;
        bool bounded = true;
        for (const auto& r : a1) {
            ib.push_back(r.int_b);
            ib2.push_back(r.int_b_s2);
            bounded = bounded && std::isfinite(r.int_b) && std::isfinite(r.int_b_s2) && r.int_b > 0 && r.int_b_s2 > 0;
        }
        for (std::size_t i = 2; i < a1.size(); ++i) {
            bounded = bounded && a1[i].int_b <= 1.1 * a1[1].int_b && a1[i].int_b_s2 <= 1.1 * a1[1].int_b_s2;
        }
        report(11, peak <= 2.0 * at16 && bounded && kt < 120.0,
               "eps n^1.5 gap " + list(norm) + ", int B " + list(ib) + ", int B/s^2 " + list(ib2) +
                   fmt(", %.1f s", kt));
    }

    // 12. Cauchy distances along the sweep
    report(12, !rep.failed() && rep.xi_cauchy && rep.p_cauchy,
           "sup |xi - xi'| " + list(rep.xi_distance) + ", sup |p - p'| " + list(rep.p_distance) +
               fmt(" (both sweeps %.1f s)", sweep_time));

    // 13. Stefan residual and the slope-jump dip / recovery
    {
        std::vector<double> res;
        for (const auto& m : rep.members) res.push_back(m.stefan_moving);
        bool decreasing = !rep.failed();
        for (std::size_t i = 0; i + 1 < res.size(); ++i) decreasing = decreasing && res[i + 1] < res[i];
        const auto& fine = rep.members.back();
        const bool shape = fine.slope_dip < kSlopeDipBelow && fine.slope_recovery > kSlopeRecoveryAbove &&
                           fine.slope_recovery_time > fine.slope_dip_time;
        report(13, decreasing && shape,
               "moving-phase residual " + list(res) + fmt("; finest: dip %.3g", fine.slope_dip) +
                   fmt(" at t = %.4g", fine.slope_dip_time) + fmt(", recovery %.3g", fine.slope_recovery) +
                   fmt(" at t = %.4g", fine.slope_recovery_time) +
                   fmt(" (golden: < %.2g", kSlopeDipBelow) + fmt(" then > %.2g)", kSlopeRecoveryAbove));
    }

    std::printf("%d of 13 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
