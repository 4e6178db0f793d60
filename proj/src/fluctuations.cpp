#include "fbd/fluctuations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fbd {

namespace {

// r for xi_new <= xi_old, branch by branch with expm1 so tiny shifts keep
// their relative precision.
double fluct_ordered(double e, double xi_old, double xi_new, double x) {
    const double shrink = -std::expm1(-(xi_old - xi_new) / e);
    if (x <= xi_new) return std::exp((x - xi_new) / e) * shrink;
    if (x >= xi_old) return std::exp(-(x - xi_old) / e) * shrink;
    return -std::expm1((x - xi_old) / e) - std::expm1(-(x - xi_new) / e);
}

void require_ordered(double xi_old, double xi_new) {
    if (xi_new > xi_old) {
        throw std::invalid_argument("local fluctuation needs xi_new <= xi_old");
    }
}

ProfileFn sample_with_node(const Domain& grid, double node, const std::function<double(double)>& fn) {
    const double v = fn(node);
    return ProfileFn::sample(grid, fn, Interface{node, v, v});
}

double gk(const std::function<double(double)>& fn, double a, double b, double tol) {
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(fn, a, b, 15, tol);
}

}  // namespace

double local_fluct_value(const Epsilon& eps, double xi_old, double xi_new, double x) {
    if (xi_new <= xi_old) return fluct_ordered(eps.value(), xi_old, xi_new, x);
    return -fluct_ordered(eps.value(), xi_new, xi_old, x);
}

double local_fluct_ess_value(const Epsilon& eps, double xi_old, double xi_new, double x) {
    return 2.0 * (xi_old - xi_new) * eval_g(eps, x - 0.5 * (xi_old + xi_new));
}

ProfileFn local_fluct(const Epsilon& eps, double xi_old, double xi_new, const Domain& grid) {
    require_ordered(xi_old, xi_new);
    return sample_with_node(grid, xi_new, [&](double x) {
        return local_fluct_value(eps, xi_old, xi_new, x);
    });
}

ProfileFn local_fluct_ess(const Epsilon& eps, double xi_old, double xi_new, const Domain& grid) {
    require_ordered(xi_old, xi_new);
    return sample_with_node(grid, xi_new, [&](double x) {
        return local_fluct_ess_value(eps, xi_old, xi_new, x);
    });
}

double local_fluct_mass(const Epsilon& eps, double xi_old, double xi_new, double tol) {
    require_ordered(xi_old, xi_new);
    auto r = [&](double x) { return local_fluct_value(eps, xi_old, xi_new, x); };
    return gk(r, -INFINITY, xi_new, tol) + gk(r, xi_new, xi_old, tol) + gk(r, xi_old, INFINITY, tol);
}

double local_fluct_ess_mass(const Epsilon& eps, double xi_old, double xi_new, double tol) {
    require_ordered(xi_old, xi_new);
    const double mid = 0.5 * (xi_old + xi_new);
    auto r = [&](double x) { return local_fluct_ess_value(eps, xi_old, xi_new, x); };
    return gk(r, -INFINITY, mid, tol) + gk(r, mid, INFINITY, tol);
}

double local_fluct_ratio(const Epsilon& eps, double xi_old, double xi_new) {
    require_ordered(xi_old, xi_new);
    if (xi_old == xi_new) return NAN;
    const double e = eps.value();
    const double mid = 0.5 * (xi_old + xi_new);
    auto ratio = [&](double x) {
        const double ess = local_fluct_ess_value(eps, xi_old, xi_new, x);
        return std::abs(local_fluct_value(eps, xi_old, xi_new, x) - ess) / ess;
    };
    double best = std::max({ratio(xi_new), ratio(xi_old), ratio(mid)});
    const double reach = 0.5 * (xi_old - xi_new) + 8.0 * e;
    constexpr int samples = 4000;
    for (int k = 0; k <= samples; ++k) {
        best = std::max(best, ratio(mid - reach + 2.0 * reach * k / samples));
    }
    return best;
}

ProfileFn regular_part_step(const Epsilon& eps, const ProfileFn& q, std::optional<double> node) {
    Smoothed sm(eps, q);
    if (!node && q.tracked()) node = q.tracked()->pos;
    return sm.resample(node);
}

namespace {

ProfileFn zero_with_node(const Domain& grid, double node) {
    return ProfileFn(grid, std::vector<double>(grid.size(), 0.0), Interface{node, 0.0, 0.0});
}

ProfileFn widen_to(const ProfileFn& f, const Domain& target) {
    if (f.domain() == target) return f;
    return f.extended(f.domain().left() - target.left(), target.right() - f.domain().right());
}

}  // namespace

FluctuationLedger::FluctuationLedger(const Epsilon& eps, const SimState& init, LedgerOptions opts)
    : eps_(eps),
      opts_(std::move(opts)),
      xis_{init.xi},
      current_{init.n, to_p(init), to_p(init), zero_with_node(init.u.domain(), init.xi),
               zero_with_node(init.u.domain(), init.xi)} {
    store(current_);
}

void FluctuationLedger::store(const LedgerFrame& frame) {
    if (opts_.frames.empty() || opts_.frames.count(frame.n)) frames_.insert_or_assign(frame.n, frame);
}

void FluctuationLedger::observe(const SimState& prev, const StepOutcome& out) {
    const Domain& grid = out.next.u.domain();
    const double xi_old = prev.xi;
    const double xi_new = out.next.xi;
    LedgerFrame& c = current_;
    if (!(c.q.domain() == grid)) {
        c.q = widen_to(c.q, grid);
        c.f = widen_to(c.f, grid);
        c.f_ess1 = widen_to(c.f_ess1, grid);
    }
    auto r = sample_with_node(grid, xi_new, [&](double x) {
        return local_fluct_value(eps_, xi_old, xi_new, x);
    });
    auto r_ess = sample_with_node(grid, xi_new, [&](double x) {
        return local_fluct_ess_value(eps_, xi_old, xi_new, x);
    });
    c.q = regular_part_step(eps_, c.q, xi_new);
    c.f = combine(1.0, regular_part_step(eps_, c.f, xi_new), 1.0, r);
    c.f_ess1 = combine(1.0, regular_part_step(eps_, c.f_ess1, xi_new), 1.0, r_ess);
    c.p = to_p(out.next);
    c.n = out.next.n;
    xis_.push_back(xi_new);

    FluctStep rec{prev.n, xi_old, xi_new, 0.0, 0.0, NAN};
    if (opts_.step_diagnostics && xi_new < xi_old) {
        rec.mass_r = local_fluct_mass(eps_, xi_old, xi_new);
        rec.mass_ess = local_fluct_ess_mass(eps_, xi_old, xi_new);
        rec.ratio = local_fluct_ratio(eps_, xi_old, xi_new);
    }
    steps_.push_back(rec);
    store(c);
}

EssentialSums essential_sums(const Epsilon& eps, const std::vector<double>& xis, double t, double x) {
    const double dt = eps.dt();
    const int n = snap_index(t, dt);
    if (n < 0 || static_cast<std::size_t>(n) >= xis.size()) {
        throw std::invalid_argument("interface history too short for the requested time");
    }
    EssentialSums out{0.0, 0.0, 0.0};
    for (int i = 1; i <= n; ++i) {
        const double weight = 2.0 * (xis[i - 1] - xis[i]);
        if (weight == 0.0) continue;
        const double y = x - 0.5 * (xis[i] + xis[i - 1]);
        const double lag = t - i * dt + dt;
        out.ess2 += weight * eval_heat((n - i + 1) * dt, y);
        out.ess3 += weight * eval_heat(lag, y);
        out.ess4 += weight * eval_heps(eps, lag, y);
    }
    // the ramp term of the step in progress; zero exactly at t = n dt
    const double ramp_lag = t - n * dt;
    if (ramp_lag > 0.0) {
        if (static_cast<std::size_t>(n + 1) >= xis.size()) {
            throw std::invalid_argument("stage-4 sum needs the interface one step ahead");
        }
        const double weight = 2.0 * (xis[n] - xis[n + 1]);
        const double y = x - 0.5 * (xis[n + 1] + xis[n]);
        out.ess4 += weight * eval_heps(eps, ramp_lag, y);
    }
    return out;
}

double f_ess4_value(const Epsilon& eps, const std::vector<double>& xis, double t, double x) {
    return essential_sums(eps, xis, t, x).ess4;
}

FluctuationSplit split_fluctuations(const FluctuationLedger& ledger, double t) {
    const Epsilon& eps = ledger.eps();
    const int n = snap_index(t, eps.dt());
    const auto it = ledger.frames().find(n);
    if (it == ledger.frames().end()) {
        std::ostringstream msg;
        msg << "no ledger frame stored for step " << n << " (t = " << t << ")";
        throw std::invalid_argument(msg.str());
    }
    const LedgerFrame& frame = it->second;
    const Domain& grid = frame.f.domain();
    const double node = frame.f.tracked()->pos;
    const auto& xis = ledger.xi_history();
    std::vector<double> s2(grid.size()), s3(grid.size()), s4(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const auto v = essential_sums(eps, xis, t, grid.x(j));
        s2[j] = v.ess2;
        s3[j] = v.ess3;
        s4[j] = v.ess4;
    }
    const auto at = essential_sums(eps, xis, t, node);
    ProfileFn e2(grid, std::move(s2), Interface{node, at.ess2, at.ess2});
    ProfileFn e3(grid, std::move(s3), Interface{node, at.ess3, at.ess3});
    ProfileFn e4(grid, std::move(s4), Interface{node, at.ess4, at.ess4});
    FluctuationSplit out{n, t, frame.f, {frame.f_ess1, e2, e3, e4}, {}};
    out.neg.push_back(combine(1.0, frame.f, -1.0, frame.f_ess1));
    out.neg.push_back(combine(1.0, frame.f_ess1, -1.0, e2));
    out.neg.push_back(combine(1.0, e2, -1.0, e3));
    out.neg.push_back(combine(1.0, e3, -1.0, e4));
    return out;
}

ProfileFn direct_duhamel(const Epsilon& eps, const std::vector<double>& xis, int n,
                         const Domain& grid) {
    if (n < 0 || static_cast<std::size_t>(n) >= xis.size()) {
        throw std::invalid_argument("interface history too short for the Duhamel sum");
    }
    ProfileFn total = zero_with_node(grid, xis[n]);
    for (int i = 1; i <= n; ++i) {
        // r^{i-1} lives at the node xi^i, then follows the same resampling as the run
        const double xo = xis[i - 1];
        const double xn = xis[i];
        ProfileFn term = sample_with_node(grid, xn, [&](double x) {
            return local_fluct_value(eps, xo, xn, x);
        });
        for (int k = i + 1; k <= n; ++k) term = regular_part_step(eps, term, xis[k]);
        total = combine(1.0, total, 1.0, term);
    }
    return total;
}

}  // namespace fbd
