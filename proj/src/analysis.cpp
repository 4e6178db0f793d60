#include "fbd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fbd {

namespace {

double fit_slope(const ProfileFn& p, double xi, double near, double far) {
    const Domain& d = p.domain();
    const double lo = std::min(xi + near, xi + far);
    const double hi = std::max(xi + near, xi + far);
    if (lo < d.left() || hi > d.right()) {
        std::ostringstream msg;
        msg << "slope probe window [" << lo << ", " << hi << "] leaves the grid";
        throw std::invalid_argument(msg.str());
    }
    std::vector<double> xs;
    std::vector<double> vs;
    for (std::size_t j = d.cell_of(lo); j < d.size(); ++j) {
        const double x = d.x(j);
        if (x > hi) break;
        if (x < lo) continue;
        xs.push_back(x - xi);
        vs.push_back(p.samples()[j]);
    }
    if (xs.size() < 3) throw std::invalid_argument("slope probe window holds fewer than 3 points");
    Eigen::MatrixXd a(xs.size(), 3);
    Eigen::VectorXd b(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        a(i, 0) = 1.0;
        a(i, 1) = xs[i];
        a(i, 2) = xs[i] * xs[i];
        b(i) = vs[i];
    }
    const Eigen::Vector3d c = a.colPivHouseholderQr().solve(b);
    return c(1);
}

void require_states(const Trajectory& traj) {
    if (traj.states.size() != traj.steps.size()) {
        throw std::invalid_argument("analysis needs every state of the run (keep_all_states)");
    }
}

int first_left_move(const Trajectory& traj) {
    for (std::size_t n = 0; n < traj.steps.size(); ++n) {
        if (traj.steps[n].mode == Mode::LM) return static_cast<int>(n);
    }
    return -1;
}

}  // namespace

SlopePair one_sided_slopes(const ProfileFn& p, double xi, double probe) {
    return {fit_slope(p, xi, -probe, -2.0 * probe), fit_slope(p, xi, probe, 2.0 * probe)};
}

namespace {

StefanSample stefan_at(const Trajectory& traj, int n, double probe, int window, bool need_window) {
    const int half = window / 2;
    const int last = static_cast<int>(traj.steps.size()) - 1;
    StefanSample s{n, traj.steps[n].t, NAN, NAN, NAN};
    if (n - half >= 0 && n + half <= last) {
        s.xi_dot = (traj.steps[n + half].xi - traj.steps[n - half].xi) / (2 * half * traj.dt);
    } else if (need_window) {
        std::ostringstream msg;
        msg << "interface-speed window of " << window << " steps around n = " << n
            << " leaves [0, " << last << "]";
        throw std::invalid_argument(msg.str());
    }
    const SimState& st = traj.states[n];
    s.slope_jump = one_sided_slopes(to_p(st), st.xi, probe).jump();
    s.residual = std::abs(2.0 * s.xi_dot + s.slope_jump);
    return s;
}

}  // namespace

StefanSample stefan_residual(const Trajectory& traj, double t, double probe, int window) {
    require_states(traj);
    return stefan_at(traj, snap_index(t, traj.dt), probe, window, true);
}

std::vector<StefanSample> slope_jump_history(const Trajectory& traj, double probe, int window) {
    require_states(traj);
    std::vector<StefanSample> out;
    for (std::size_t n = 0; n < traj.states.size(); ++n) {
        out.push_back(stefan_at(traj, static_cast<int>(n), probe, window, false));
    }
    return out;
}

double moving_phase_residual(const Trajectory& traj, double probe, int window) {
    require_states(traj);
    const int k = first_left_move(traj);
    if (k < 0) return NAN;
    const int half = window / 2;
    const int last = static_cast<int>(traj.steps.size()) - 1;
    double sum = 0.0;
    int count = 0;
    for (int n = k + half; n <= last - half; ++n) {
        sum += stefan_at(traj, n, probe, window, true).residual;
        ++count;
    }
    return count ? sum / count : NAN;
}

std::vector<FlowRuleViolation> flow_rule_check(const Trajectory& traj, double tol) {
    std::vector<FlowRuleViolation> out;
    for (std::size_t i = 1; i < traj.steps.size(); ++i) {
        const auto& s = traj.steps[i];
        const int n = static_cast<int>(i);
        switch (s.mode) {
            case Mode::ST: {
                const double excess = std::max(s.p_at_xi - kPUpper, kPLower - s.p_at_xi);
                if (excess > tol) out.push_back({n, "standing-band", excess});
                break;
            }
            case Mode::LM:
                if (std::abs(s.p_at_xi - kPUpper) > tol) {
                    out.push_back({n, "moving-value", std::abs(s.p_at_xi - kPUpper)});
                }
                break;
            case Mode::RM:
                out.push_back({n, "right-move", std::abs(s.xi - traj.steps[i - 1].xi)});
                if (std::abs(s.p_at_xi - kPLower) > tol) {
                    out.push_back({n, "moving-value", std::abs(s.p_at_xi - kPLower)});
                }
                break;
            case Mode::None: break;
        }
        const double rise = s.xi - traj.steps[i - 1].xi;
        if (rise > tol) out.push_back({n, "monotonicity", rise});
    }
    return out;
}

double depinning_time(const Trajectory& traj) {
    const int k = first_left_move(traj);
    return k < 0 ? INFINITY : traj.steps[k].t;
}

double bulk_residual(const Trajectory& traj, int n, double collar) {
    require_states(traj);
    if (n < 0 || n + 1 >= static_cast<int>(traj.states.size())) {
        throw std::invalid_argument("bulk_residual: step index out of range");
    }
    const SimState& a = traj.states[n];
    const SimState& b = traj.states[n + 1];
    if (!(a.u.domain() == b.u.domain())) return NAN;
    const ProfileFn pa = to_p(a);
    const ProfileFn pb = to_p(b);
    const Domain& d = pa.domain();
    const double h2 = d.h() * d.h();
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < d.size(); ++j) {
        const double x = d.x(j);
        if (std::abs(x - a.xi) <= collar || std::abs(x - b.xi) <= collar) continue;
        if (x - d.left() <= collar || d.right() - x <= collar) continue;
        const auto& s = pb.samples();
        const double lap = (s[j + 1] - 2.0 * s[j] + s[j - 1]) / h2;
        const double rate = (s[j] - pa.samples()[j]) / traj.dt;
        worst = std::max(worst, std::abs(rate - lap));
    }
    return worst;
}

HolderQuotients holder_quotient(const FieldSampler& f, double gamma, int pairs, std::uint64_t seed,
                                double t_lo, double t_hi, double x_lo, double x_hi) {
    if (!(gamma > 0.0 && gamma < 0.5)) throw std::invalid_argument("gamma must lie in (0, 1/2)");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ut(t_lo, t_hi);
    std::uniform_real_distribution<double> ux(x_lo, x_hi);
    HolderQuotients q{0.0, 0.0};
    for (int k = 0; k < pairs; ++k) {
        const double t1 = ut(rng);
        const double t2 = ut(rng);
        const double x = ux(rng);
        if (t1 != t2) {
            q.time = std::max(q.time, std::abs(f(t2, x) - f(t1, x)) / std::pow(std::abs(t2 - t1), gamma));
        }
        const double t = ut(rng);
        const double x1 = ux(rng);
        const double x2 = ux(rng);
        if (x1 != x2) {
            q.space = std::max(q.space, std::abs(f(t, x2) - f(t, x1)) / std::sqrt(std::abs(x2 - x1)));
        }
    }
    return q;
}

std::vector<KernelGapRow> kernel_gap_study(const Epsilon& eps, const std::vector<int>& n_list,
                                           const std::optional<PiecewiseLinear>& data,
                                           double grid_divisor) {
    if (n_list.empty()) return {};
    for (int n : n_list) {
        if (n < 1) throw std::invalid_argument("kernel gap study needs positive n");
    }
    const std::set<int> wanted(n_list.begin(), n_list.end());
    const int n_max = *wanted.rbegin();
    const double h = eps.value() / grid_divisor;
    const double half = std::ceil(conv_power_half_width(eps, n_max) / h) * h;
    const Domain grid = Domain::whole_line(-half, half, h);

    std::optional<ProfileFn> q;
    double cmp_lo = 0.0;
    double cmp_hi = 0.0;
    if (data) {
        double lo = 0.0;
        double hi = 0.0;
        std::optional<double> kink;
        const auto& pcs = data->pieces();
        for (std::size_t i = 1; i < pcs.size(); ++i) {
            const double at = pcs[i].from;
            if (!kink) {
                kink = at;
                lo = hi = at;
            }
            lo = std::min(lo, at);
            hi = std::max(hi, at);
        }
        // compare on kinks +- `pad`; the grid reaches one kernel width further so
        // that linear extrapolation past its ends never feeds the window
        const double pad = std::ceil(std::max(1.0, 20.0 * eps.value()) / h) * h;
        cmp_lo = std::floor(lo / h) * h - pad;
        cmp_hi = std::ceil(hi / h) * h + pad;
        const Domain dg = Domain::whole_line(cmp_lo - half, cmp_hi + half, h);
        std::optional<Interface> node;
        if (kink) node = Interface{*kink, (*data)(*kink), (*data)(*kink)};
        q = ProfileFn::sample(dg, [&](double x) { return (*data)(x); }, node);
    }

    std::vector<KernelGapRow> rows;
    ProfileFn power = ProfileFn::sample(grid, [&](double x) { return eval_g(eps, x); });
    for (int k = 1; k <= n_max; ++k) {
        if (k > 1) power = convolve_g(eps, power);
        if (q) *q = convolve_g(eps, *q);
        if (!wanted.count(k)) continue;
        const double t = k * eps.dt();
        double gap = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            gap = std::max(gap, std::abs(power.samples()[j] - eval_heat(t, grid.x(j))));
        }
        KernelGapRow row{k, gap, eps.value() * std::pow(k, 1.5) * gap, NAN, NAN};
        if (q) {
            double dgap = 0.0;
            const Domain& dg = q->domain();
            for (std::size_t j = 0; j < dg.size(); ++j) {
                if (dg.x(j) < cmp_lo || dg.x(j) > cmp_hi) continue;
                dgap = std::max(dgap, std::abs(q->samples()[j] - heat_exact(*data, t, dg.x(j))));
            }
            row.data_gap = dgap;
            row.data_normalized = std::sqrt(static_cast<double>(k)) / eps.value() * dgap;
        }
        rows.push_back(row);
    }
    return rows;
}

double lemma_a1_integrand(int n, double s) {
    const double nn = static_cast<double>(n);
    const double x = s * s / nn;
    double excess = 0.0;  // x - log(1 + x) >= 0
    if (x < 1e-2) {
        double term = x;
        for (int k = 2; k < 14; ++k) {
            term *= -x;
            excess += (k % 2 == 0 ? 1.0 : -1.0) * std::abs(term) / k;
        }
    } else {
        excess = x - std::log1p(x);
    }
    const double d = nn * excess;
    double diff = 0.0;
    if (d < 30.0) {
        diff = std::exp(-s * s) * std::expm1(d);
    } else {
        diff = std::exp(-nn * std::log1p(x)) - std::exp(-s * s);
    }
    return nn * std::abs(diff);
}

std::vector<LemmaA1Row> lemma_a1_integrals(const std::vector<int>& n_list) {
    using boost::math::quadrature::gauss_kronrod;
    std::vector<LemmaA1Row> rows;
    for (int n : n_list) {
        if (n < 1) throw std::invalid_argument("Lemma A.1 table needs positive n");
        auto b = [n](double s) { return lemma_a1_integrand(n, s); };
        auto b_s2 = [n](double s) { return s < 1e-6 ? 0.5 * s * s : lemma_a1_integrand(n, s) / (s * s); };
        // split at s = 1 where the integrands peak; B_n is even
        const double ib = 2.0 * (gauss_kronrod<double, 61>::integrate(b, 0.0, 1.0, 15, 1e-12) +
                                 gauss_kronrod<double, 61>::integrate(b, 1.0, INFINITY, 15, 1e-12));
        const double is = 2.0 * (gauss_kronrod<double, 61>::integrate(b_s2, 0.0, 1.0, 15, 1e-12) +
                                 gauss_kronrod<double, 61>::integrate(b_s2, 1.0, INFINITY, 15, 1e-12));
        rows.push_back({n, ib, is});
    }
    return rows;
}

std::vector<double> empirical_orders(const std::vector<double>& eps, const std::vector<double>& err) {
    if (eps.size() != err.size()) throw std::invalid_argument("empirical_orders: size mismatch");
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
        out.push_back(std::log(err[i] / err[i + 1]) / std::log(eps[i] / eps[i + 1]));
    }
    return out;
}

}  // namespace fbd
