#include <doctest.h>

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "fbd/analysis.hpp"
#include "fbd/config.hpp"
#include "fbd/kernels.hpp"
#include "fbd/sweep.hpp"

using namespace fbd;

namespace {

StepRecord rec(double t, double xi, Mode mode, double p) { return StepRecord{t, xi, mode, p, NAN, 2.0, 0.0}; }

// int (1 + s²/n)^{-n} ds over the real line minus sqrt(pi), times n.
double int_b_closed(int n) {
    const double student = std::sqrt(n * M_PI) * boost::math::tgamma_delta_ratio(n - 0.5, 0.5);
    return n * (student - std::sqrt(M_PI));
}

}  // namespace

TEST_CASE("one-sided slopes are exact for quadratics on each side") {
    const Domain d = Domain::whole_line(-1.0, 1.0, 0.01);
    const double xi = 0.013;
    auto f = [&](double x) {
        const double y = x - xi;
        return y <= 0 ? 0.4 + 2.0 * y - 3.0 * y * y : 0.4 + 7.0 * y + 1.5 * y * y;
    };
    const ProfileFn p = ProfileFn::sample(d, f, Interface{xi, 0.4, 0.4});
    const SlopePair s = one_sided_slopes(p, xi, 0.1);
    CHECK(s.left == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(s.right == doctest::Approx(7.0).epsilon(1e-10));
    CHECK(s.jump() == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("flow rule bookkeeping") {
    Trajectory traj;
    traj.dt = 0.01;
    traj.steps = {rec(0.0, 0.0, Mode::None, 0.4), rec(0.01, 0.0, Mode::ST, 0.9),
                  rec(0.02, -0.01, Mode::LM, 1.0), rec(0.03, -0.01, Mode::ST, 1.2),
                  rec(0.04, -0.02, Mode::LM, 0.97), rec(0.05, -0.015, Mode::RM, -1.0)};
    const auto v = flow_rule_check(traj, 1e-6);
    REQUIRE(v.size() == 4);
    CHECK(v[0].kind == "standing-band");
    CHECK(v[0].magnitude == doctest::Approx(0.2));
    CHECK(v[1].kind == "moving-value");
    CHECK(v[2].kind == "right-move");
    CHECK(v[3].kind == "monotonicity");
    CHECK(v[3].magnitude == doctest::Approx(0.005));
    CHECK(depinning_time(traj) == doctest::Approx(0.02));
    traj.steps.resize(2);
    CHECK(std::isinf(depinning_time(traj)));
}

TEST_CASE("Hoelder quotients are reproducible and scale as expected") {
    auto f = [](double t, double x) { return std::sqrt(std::abs(x)) + t; };
    const auto a = holder_quotient(f, 0.25, 5000, 42, 0.0, 1.0, -1.0, 1.0);
    const auto b = holder_quotient(f, 0.25, 5000, 42, 0.0, 1.0, -1.0, 1.0);
    CHECK(a.time == b.time);
    CHECK(a.space == b.space);
    // |t2 - t1|^{3/4} <= 1 and |sqrt|x2| - sqrt|x1|| <= |x2 - x1|^{1/2}, both nearly attained
    CHECK(a.time <= 1.0);
    CHECK(a.time > 0.9);
    CHECK(a.space <= 1.0 + 1e-12);
    CHECK(a.space > 0.9);
    CHECK_THROWS(holder_quotient(f, 0.5, 10, 1, 0.0, 1.0, 0.0, 1.0));
}

TEST_CASE("kernel gap: single factor and bounded normalization") {
    const Epsilon eps(0.1);
    const auto rows = kernel_gap_study(eps, {1, 4, 16});
    REQUIRE(rows.size() == 3);
    // g(0) - G0(eps², 0) = 5 - 1/sqrt(0.04 pi)
    CHECK(rows[0].sup_gap == doctest::Approx(5.0 - 1.0 / std::sqrt(0.04 * M_PI)).epsilon(1e-12));
    CHECK(rows[0].sup_gap == doctest::Approx(2.17903).epsilon(1e-5));
    CHECK(rows[1].normalized == doctest::Approx(rows[2].normalized).epsilon(0.2));
    CHECK(std::isnan(rows[0].data_gap));
}

TEST_CASE("B_n integrals against closed forms") {
    CHECK(lemma_a1_integrand(3, 0.7) ==
          doctest::Approx(3.0 * std::abs(std::pow(1.0 + 0.49 / 3.0, -3.0) - std::exp(-0.49))).epsilon(1e-13));
    CHECK(lemma_a1_integrand(1000000, 2.0) ==
          doctest::Approx(1e6 * std::abs(std::exp(-1e6 * std::log1p(4e-6)) - std::exp(-4.0))).epsilon(1e-6));
    const auto rows = lemma_a1_integrals({1, 10, 100, 1000});
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].int_b == doctest::Approx(M_PI - std::sqrt(M_PI)).epsilon(1e-10));
    CHECK(rows[0].int_b_s2 == doctest::Approx(2.0 * std::sqrt(M_PI) - M_PI).epsilon(1e-10));
    for (const auto& r : rows) {
        CHECK(r.int_b == doctest::Approx(int_b_closed(r.n)).epsilon(1e-9));
        CHECK(r.int_b_s2 > 0.0);
        CHECK(r.int_b_s2 < 1.0);
    }
}

TEST_CASE("empirical orders") {
    const auto o = empirical_orders({0.1, 0.05, 0.025}, {0.04, 0.01, 0.0025});
    REQUIRE(o.size() == 2);
    CHECK(o[0] == doctest::Approx(2.0));
    CHECK(o[1] == doctest::Approx(2.0));
}

TEST_CASE("reference run diagnostics") {
    ExperimentConfig cfg = preset_reference();
    const Experiment ex = run_experiment(cfg);
    REQUIRE_FALSE(ex.traj.error);
    CHECK(depinning_time(ex.traj) == doctest::Approx(0.05));
    CHECK(flow_rule_check(ex.traj, flow_tolerance(cfg)).empty());
    const auto hist = slope_jump_history(ex.traj, 0.3);
    REQUIRE(hist.size() == ex.traj.steps.size());
    // the initial slope jump 7 - 2 is seen by the estimator at n = 0
    CHECK(hist[0].slope_jump == doctest::Approx(5.0).epsilon(1e-8));
    const auto st = stefan_residual(ex.traj, 0.15, 0.3);
    CHECK(st.n == 15);
    CHECK(st.residual == doctest::Approx(std::abs(2.0 * st.xi_dot + st.slope_jump)));
    CHECK_THROWS(stefan_residual(ex.traj, 0.25, 0.3));
    CHECK(mid_step_time(0.15, 0.01) == doctest::Approx(0.155));
}
