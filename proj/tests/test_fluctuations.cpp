#include <doctest.h>

#include <cmath>

#include "fbd/config.hpp"
#include "fbd/fluctuations.hpp"
#include "fbd/sweep.hpp"
#include "quad.hpp"

using namespace fbd;

namespace {

ExperimentConfig whole_line_reference(double t_final) {
    ExperimentConfig cfg = preset_reference();
    cfg.backend = DomainKind::WholeLine;
    cfg.t_final = t_final;
    cfg.snapshot_times = {};
    cfg.decompose_times = {};
    return cfg;
}

}  // namespace

TEST_CASE("local fluctuation is twice the kernel mass swept by the interface") {
    const Epsilon eps(0.1);
    const double xo = 0.02;
    const double xn = -0.013;
    for (double x : {-0.5, -0.013, 0.0, 0.02, 0.3}) {
        const double q = 2.0 * oracle::gk([&](double y) { return eval_g(eps, x - y); }, xn, xo);
        CHECK(local_fluct_value(eps, xo, xn, x) == doctest::Approx(q).epsilon(1e-13));
    }
    CHECK(local_fluct_value(eps, xn, xo, 0.1) == doctest::Approx(-local_fluct_value(eps, xo, xn, 0.1)));
    CHECK(local_fluct_ess_value(eps, xo, xn, 0.5 * (xo + xn)) == doctest::Approx((xo - xn) / 0.1));
    CHECK(local_fluct_mass(eps, xo, xn) == doctest::Approx(2.0 * (xo - xn)).epsilon(1e-13));
    CHECK(local_fluct_ess_mass(eps, xo, xn) == doctest::Approx(2.0 * (xo - xn)).epsilon(1e-13));
    const Domain d = Domain::whole_line(-1.0, 1.0, 0.01);
    CHECK_THROWS(local_fluct(eps, xn, xo, d));
    const ProfileFn r = local_fluct(eps, xo, xn, d);
    CHECK(r.tracked()->pos == xn);
    CHECK(integrate(r) == doctest::Approx(2.0 * (xo - xn)).epsilon(1e-4));
}

TEST_CASE("surrogate error peaks at the midpoint of the shift") {
    for (double e : {0.1, 0.05, 0.025}) {
        const Epsilon eps(e);
        const double shift = 0.6 * e * e;  // constant speed 0.6
        const double z = shift / (2.0 * e);
        const double centre = 1.0 + std::expm1(-z) / z;
        CHECK(local_fluct_ratio(eps, 0.0, -shift) == doctest::Approx(centre).epsilon(1e-10));
        // first order in eps at fixed speed
        CHECK(local_fluct_ratio(eps, 0.0, -shift) / e == doctest::Approx(0.15).epsilon(0.02));
    }
    CHECK(std::isnan(local_fluct_ratio(Epsilon(0.1), 0.0, 0.0)));
}

TEST_CASE("ledger keeps p = q - f on the whole line") {
    const ExperimentConfig cfg = whole_line_reference(0.12);
    const Experiment ex = run_experiment(cfg);
    REQUIRE_FALSE(ex.traj.error);
    for (const auto& [n, fr] : ex.ledger.frames()) {
        const ProfileFn gap = combine(1.0, fr.p, -1.0, combine(1.0, fr.q, -1.0, fr.f));
        CHECK(sup_norm(gap) < 1e-10);
    }
    for (const auto& s : ex.ledger.steps()) {
        if (s.xi_new == s.xi_old) continue;
        CHECK(std::abs(s.mass_r - 2.0 * (s.xi_old - s.xi_new)) < 1e-12);
        CHECK(std::abs(s.mass_ess - 2.0 * (s.xi_old - s.xi_new)) < 1e-12);
    }
}

TEST_CASE("incremental f agrees with the direct Duhamel sum") {
    const ExperimentConfig cfg = whole_line_reference(0.1);
    const Experiment ex = run_experiment(cfg);
    const int n = 10;
    const ProfileFn& f = ex.ledger.frames().at(n).f;
    const ProfileFn direct = direct_duhamel(cfg.eps(), ex.ledger.xi_history(), n, f.domain());
    CHECK(sup_distance(f, direct) < 1e-12);
}

TEST_CASE("split telescopes and stages 3-4 vanish at step times") {
    const ExperimentConfig cfg = whole_line_reference(0.16);
    const Experiment ex = run_experiment(cfg);
    const double dt = cfg.eps2;
    const auto mid = split_fluctuations(ex.ledger, 15.5 * dt);
    const auto& f = mid.f.samples();
    for (std::size_t j = 0; j < f.size(); j += 13) {
        double sum = mid.ess[3].samples()[j];
        for (const auto& g : mid.neg) sum += g.samples()[j];
        CHECK(sum == doctest::Approx(f[j]).epsilon(1e-13).scale(1.0));
    }
    CHECK(sup_norm(mid.neg[2]) > 1e-4);
    CHECK(sup_norm(mid.neg[3]) > 1e-4);

    const auto at = split_fluctuations(ex.ledger, 15 * dt);
    CHECK(sup_norm(at.neg[2]) < 1e-14);
    CHECK(sup_norm(at.neg[3]) < 1e-14);
    CHECK_THROWS(split_fluctuations(ex.ledger, 16.5 * dt));  // xi^17 unknown
}

TEST_CASE("essential sums against a direct evaluation") {
    const Epsilon eps(0.1);
    const std::vector<double> xis{0.0, 0.0, -0.01, -0.025, -0.03};
    const double t = 0.032;  // n = 3, inside step 3 -> 4
    const double x = 0.04;
    double e2 = 0.0, e3 = 0.0, e4 = 0.0;
    for (int i = 1; i <= 3; ++i) {
        const double w = 2.0 * (xis[i - 1] - xis[i]);
        const double m = 0.5 * (xis[i - 1] + xis[i]);
        e2 += w * std::exp(-(x - m) * (x - m) / (4.0 * (4 - i) * 0.01)) / std::sqrt(4.0 * M_PI * (4 - i) * 0.01);
        const double lag = t - (i - 1) * 0.01;
        const double g = std::exp(-(x - m) * (x - m) / (4.0 * lag)) / std::sqrt(4.0 * M_PI * lag);
        e3 += w * g;
        e4 += w * g;
    }
    const double lag = 0.002;
    e4 += 2.0 * 0.005 * (lag / 0.01) * std::exp(-std::pow(x + 0.0275, 2) / 0.04) / std::sqrt(0.04 * M_PI);
    const auto s = essential_sums(eps, xis, t, x);
    CHECK(s.ess2 == doctest::Approx(e2).epsilon(1e-13));
    CHECK(s.ess3 == doctest::Approx(e3).epsilon(1e-13));
    CHECK(s.ess4 == doctest::Approx(e4).epsilon(1e-13));
    CHECK(f_ess4_value(eps, xis, t, x) == s.ess4);
}

TEST_CASE("a standing run accumulates no fluctuation") {
    ExperimentConfig cfg = whole_line_reference(0.05);
    cfg.segments = {{-2.0, 0.0, 0.0, -1.0}, {0.0, 2.0, 0.0, 1.0}};
    const Experiment ex = run_experiment(cfg);
    for (const auto& [n, fr] : ex.ledger.frames()) {
        CHECK(sup_norm(fr.f) == 0.0);
        CHECK(sup_norm(fr.f_ess1) == 0.0);
    }
}
