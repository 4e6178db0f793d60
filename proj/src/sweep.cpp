#include "fbd/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <sstream>

namespace fbd {

Experiment run_experiment(const ExperimentConfig& cfg, const ExperimentOptions& opts) {
    const Epsilon eps = cfg.eps();
    const SimState init = cfg.initial_state();
    FluctuationLedger ledger(eps, init, LedgerOptions{opts.ledger_frames, opts.step_diagnostics});
    RunOptions ro;
    ro.keep_all_states = opts.keep_all_states;
    ro.step.root_tol = cfg.root_tol();
    ro.observer = [&ledger](const SimState& prev, const StepOutcome& out) { ledger.observe(prev, out); };
    Trajectory traj = run(init, eps, cfg.t_final, cfg.snapshot_times, ro);
    return Experiment{cfg, std::move(traj), std::move(ledger)};
}

double flow_tolerance(const ExperimentConfig& cfg) {
    return cfg.backend == DomainKind::WholeLine ? 1e-6 : 10.0 * cfg.h;
}

double mid_step_time(double t, double dt) { return (snap_index(t, dt) + 0.5) * dt; }

namespace {

double decomposition_gap(const LedgerFrame& fr) {
    double worst = 0.0;
    const auto& p = fr.p.samples();
    const auto& q = fr.q.samples();
    const auto& f = fr.f.samples();
    for (std::size_t j = 0; j < p.size(); ++j) worst = std::max(worst, std::abs(p[j] - (q[j] - f[j])));
    const double node = fr.p.tracked()->pos;
    worst = std::max(worst, std::abs(fr.p(node) - (fr.q(node) - fr.f(node))));
    return worst;
}

// Bounded runs feel their walls within a few diffusion lengths; compare the
// interior half only.
bool in_window(const ExperimentConfig& cfg, double x) {
    if (cfg.backend == DomainKind::WholeLine) return true;
    const double margin = 0.25 * (cfg.right - cfg.left);
    return x >= cfg.left + margin && x <= cfg.right - margin;
}

}  // namespace

MemberReport member_diagnostics(const Experiment& ex) {
    const ExperimentConfig& cfg = ex.cfg;
    const Epsilon eps = cfg.eps();
    const double dt = eps.dt();
    const Trajectory& traj = ex.traj;
    MemberReport m;
    m.eps2 = cfg.eps2;
    m.eps = eps.value();
    m.error = traj.error;
    m.depinning_time = depinning_time(traj);

    const auto viol = flow_rule_check(traj, flow_tolerance(cfg));
    for (const auto& v : viol) {
        if (v.kind == "right-move") ++m.right_moves;
        ++m.flow_violations;
        m.flow_worst = std::max(m.flow_worst, v.magnitude);
    }
    const double alpha = cfg.alpha();
    for (std::size_t i = 1; i < traj.steps.size(); ++i) {
        const double shift = traj.steps[i - 1].xi - traj.steps[i].xi;
        m.max_speed_ratio = std::max(m.max_speed_ratio, shift / (0.5 * alpha * dt));
    }
    double ratio = 0.0;
    bool moved = false;
    for (const auto& s : ex.ledger.steps()) {
        if (!(s.xi_new < s.xi_old)) continue;
        moved = true;
        m.max_mass_error = std::max(m.max_mass_error, std::abs(s.mass_r - 2.0 * (s.xi_old - s.xi_new)));
        ratio = std::max(ratio, s.ratio);
    }
    if (moved) m.lemma_ratio = ratio / eps.value();
    for (const auto& [n, fr] : ex.ledger.frames()) {
        m.decomposition_error = std::max(m.decomposition_error, decomposition_gap(fr));
    }

    const PiecewiseLinear p_ini = cfg.p_ini();
    const int nc = snap_index(cfg.compare_time, dt);
    if (const auto it = ex.ledger.frames().find(nc); it != ex.ledger.frames().end() && nc > 0) {
        const ProfileFn& q = it->second.q;
        double err = 0.0;
        for (std::size_t j = 0; j < q.domain().size(); ++j) {
            const double x = q.domain().x(j);
            if (!in_window(cfg, x)) continue;
            err = std::max(err, std::abs(q.samples()[j] - heat_exact(p_ini, nc * dt, x)));
        }
        m.q_error = err;
    }

    const double probe = 3.0 * eps.value();
    if (traj.states.size() == traj.steps.size()) {
        try {
            m.stefan_moving = moving_phase_residual(traj, probe);
            m.stefan_at = stefan_residual(traj, cfg.stefan_time, probe);
        } catch (const std::invalid_argument&) {
            // window does not fit this run; leave NaN
        }
        const auto hist = slope_jump_history(traj, probe);
        std::size_t dip = 1;
        for (std::size_t n = 1; n < hist.size(); ++n) {
            if (hist[n].slope_jump < hist[dip].slope_jump) dip = n;
        }
        if (hist.size() > 1) {
            m.slope_dip = hist[dip].slope_jump;
            m.slope_dip_time = hist[dip].t;
            for (std::size_t n = dip + 1; n < hist.size(); ++n) {
                if (!(hist[n].slope_jump <= m.slope_recovery)) {
                    m.slope_recovery = hist[n].slope_jump;
                    m.slope_recovery_time = hist[n].t;
                }
            }
        }
    }

    const auto& xis = ex.ledger.xi_history();
    const double ts = mid_step_time(cfg.split_time, dt);
    if (ex.ledger.frames().count(snap_index(ts, dt)) &&
        static_cast<std::size_t>(snap_index(ts, dt) + 1) < xis.size()) {
        const auto split = split_fluctuations(ex.ledger, ts);
        m.split_time = ts;
        for (int i = 0; i < 4; ++i) m.neg_sup[i] = sup_norm(split.neg[i]);
        m.ess4_sup = sup_norm(split.ess[3]);
        const auto& e4 = split.ess[3].samples();
        const double h = split.ess[3].domain().h();
        double l2 = 0.0;
        for (std::size_t j = 0; j + 1 < e4.size(); ++j) {
            const double d = (e4[j + 1] - e4[j]) / h;
            l2 += d * d * h;
        }
        m.ess4_dx_l2 = std::sqrt(l2);
    }

    if (xis.size() > 1) {
        const double t_hi = (xis.size() - 1) * dt * (1.0 - 1e-12);
        const double x_lo = std::max(cfg.left, *std::min_element(xis.begin(), xis.end()) - 0.5);
        const double x_hi = std::min(cfg.right, cfg.xi0 + 0.5);
        m.holder = holder_quotient(
            [&](double t, double x) { return f_ess4_value(eps, xis, t, x); }, cfg.gamma,
            cfg.holder_pairs, cfg.seed, 0.0, t_hi, x_lo, x_hi);
    }
    return m;
}

bool DiagnosticsReport::failed() const {
    return std::any_of(members.begin(), members.end(), [](const MemberReport& m) { return m.error.has_value(); });
}

namespace {

struct Member {
    std::optional<Experiment> ex;
    MemberReport report;
};

Member run_member(const ExperimentConfig& cfg) {
    Member m;
    try {
        const double dt = cfg.eps2;
        ExperimentOptions opts;
        opts.ledger_frames = {snap_index(cfg.compare_time, dt), snap_index(mid_step_time(cfg.split_time, dt), dt)};
        m.ex.emplace(run_experiment(cfg, opts));
        m.report = member_diagnostics(*m.ex);
    } catch (const std::exception& e) {
        m.report.eps2 = cfg.eps2;
        m.report.eps = std::sqrt(cfg.eps2);
        m.report.error = e.what();
    }
    return m;
}

}  // namespace

DiagnosticsReport converge_sweep(const ExperimentConfig& cfg) {
    DiagnosticsReport rep;
    rep.seed = cfg.seed;
    rep.gamma = cfg.gamma;
    rep.backend = std::string(to_string(cfg.backend));
    std::vector<std::future<Member>> jobs;
    for (double e2 : cfg.sweep_eps2) {
        jobs.push_back(std::async(std::launch::async, run_member, cfg.with_eps2(e2)));
    }
    std::vector<Member> members;
    for (auto& j : jobs) members.push_back(j.get());
    for (const auto& m : members) rep.members.push_back(m.report);
    if (rep.failed()) return rep;

    double dt_c = 0.0;
    for (double e2 : cfg.sweep_eps2) dt_c = std::max(dt_c, e2);
    const int levels = snap_index(cfg.t_final, dt_c);
    for (std::size_t i = 0; i + 1 < members.size(); ++i) {
        const Experiment& a = *members[i].ex;
        const Experiment& b = *members[i + 1].ex;
        double dxi = 0.0;
        double dp = 0.0;
        for (int k = 0; k <= levels; ++k) {
            const double t = k * dt_c;
            const auto& sa = a.traj.states.at(snap_index(t, a.cfg.eps2));
            const auto& sb = b.traj.states.at(snap_index(t, b.cfg.eps2));
            dxi = std::max(dxi, std::abs(sa.xi - sb.xi));
            const ProfileFn pa = to_p(sa);
            const ProfileFn pb = to_p(sb);
            for (std::size_t j = 0; j < pa.domain().size(); ++j) {
                const double x = pa.domain().x(j);
                dp = std::max(dp, std::abs(pa.samples()[j] - pb(x)));
            }
        }
        rep.xi_distance.push_back(dxi);
        rep.p_distance.push_back(dp);
    }
    auto decreasing = [](const std::vector<double>& v) {
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            if (!(v[i + 1] < v[i])) return false;
        }
        return true;
    };
    rep.xi_cauchy = decreasing(rep.xi_distance);
    rep.p_cauchy = decreasing(rep.p_distance);

    std::vector<double> epss;
    std::vector<double> q_err;
    std::vector<double> st_err;
    for (const auto& m : rep.members) {
        epss.push_back(m.eps);
        q_err.push_back(m.q_error);
        st_err.push_back(m.stefan_moving);
    }
    rep.q_orders = empirical_orders(epss, q_err);
    rep.stefan_orders = empirical_orders(epss, st_err);
    for (int i = 0; i < 4; ++i) {
        for (std::size_t k = 0; k + 1 < rep.members.size(); ++k) {
            rep.neg_factors[i].push_back(rep.members[k].neg_sup[i] / rep.members[k + 1].neg_sup[i]);
        }
    }
    return rep;
}

namespace {

Json numbers(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

}  // namespace

Json to_json(const MemberReport& m) {
    Json j;
    j["eps2"] = number(m.eps2);
    j["eps"] = number(m.eps);
    j["error"] = m.error ? Json(*m.error) : Json(nullptr);
    j["depinning_time"] = number(m.depinning_time);
    j["flow_rule"] = {{"violations", m.flow_violations}, {"worst", number(m.flow_worst)},
                      {"right_moves", m.right_moves}};
    j["max_speed_ratio"] = number(m.max_speed_ratio);
    j["max_mass_error"] = number(m.max_mass_error);
    j["local_ratio_over_eps"] = number(m.lemma_ratio);
    j["decomposition_error"] = number(m.decomposition_error);
    j["q_error"] = number(m.q_error);
    j["stefan"] = {{"moving_phase_mean", number(m.stefan_moving)},
                   {"t", number(m.stefan_at.t)},
                   {"xi_dot", number(m.stefan_at.xi_dot)},
                   {"slope_jump", number(m.stefan_at.slope_jump)},
                   {"residual", number(m.stefan_at.residual)}};
    j["slope_jump"] = {{"dip", number(m.slope_dip)},
                       {"dip_time", number(m.slope_dip_time)},
                       {"recovery", number(m.slope_recovery)},
                       {"recovery_time", number(m.slope_recovery_time)}};
    j["split"] = {{"t", number(m.split_time)},
                  {"neg_sup", numbers({m.neg_sup.begin(), m.neg_sup.end()})},
                  {"ess4_sup", number(m.ess4_sup)},
                  {"ess4_dx_l2", number(m.ess4_dx_l2)}};
    j["holder"] = {{"time", number(m.holder.time)}, {"space", number(m.holder.space)}};
    return j;
}

Json to_json(const DiagnosticsReport& r) {
    Json j;
    j["seed"] = r.seed;
    j["gamma"] = r.gamma;
    j["backend"] = r.backend;
    j["failed"] = r.failed();
    Json ms = Json::array();
    for (const auto& m : r.members) ms.push_back(to_json(m));
    j["members"] = ms;
    j["cauchy"] = {{"xi_distance", numbers(r.xi_distance)},
                   {"p_distance", numbers(r.p_distance)},
                   {"xi_decreasing", r.xi_cauchy},
                   {"p_decreasing", r.p_cauchy}};
    Json rates;
    rates["q_error"] = numbers(r.q_orders);
    rates["stefan_moving"] = numbers(r.stefan_orders);
    for (int i = 0; i < 4; ++i) {
        rates["neg" + std::to_string(i + 1) + "_factor"] = numbers(r.neg_factors[i]);
    }
    j["rates"] = rates;
    return j;
}

std::string to_text(const DiagnosticsReport& r) {
    std::ostringstream out;
    out << std::setprecision(4);
    out << std::left << std::setw(10) << "eps2" << std::setw(12) << "depin" << std::setw(12) << "q_err"
        << std::setw(12) << "stefan" << std::setw(12) << "neg1" << std::setw(12) << "neg2"
        << std::setw(12) << "neg3" << std::setw(12) << "neg4" << std::setw(12) << "holder_t"
        << std::setw(12) << "holder_x" << "\n";
    for (const auto& m : r.members) {
        out << std::setw(10) << m.eps2;
        if (m.error) {
            out << "FAILED: " << *m.error << "\n";
            continue;
        }
        out << std::setw(12) << m.depinning_time << std::setw(12) << m.q_error << std::setw(12)
            << m.stefan_moving;
        for (double v : m.neg_sup) out << std::setw(12) << v;
        out << std::setw(12) << m.holder.time << std::setw(12) << m.holder.space << "\n";
    }
    out << "\nconsecutive pairs: ";
    for (std::size_t i = 0; i < r.xi_distance.size(); ++i) {
        out << (i ? "; " : "") << "|dxi| " << r.xi_distance[i] << ", |dp| " << r.p_distance[i];
    }
    out << "\n";
    return out.str();
}

}  // namespace fbd
