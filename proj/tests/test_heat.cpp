#include <doctest.h>

#include <cmath>
#include <vector>

#include "fbd/heat.hpp"
#include "fbd/kernels.hpp"
#include "quad.hpp"

using namespace fbd;

namespace {

const double kInf = INFINITY;

PiecewiseLinear tent() {
    return PiecewiseLinear({{-kInf, 0.0, 2.0, -0.6}, {0.0, 1.0, 7.0, -0.6}, {1.0, kInf, -1.0, 7.4}});
}

// Crank-Nicolson on a wide bounded window with the exact linear data held at
// the ends; second order in both h and dt.
double crank_nicolson(const PiecewiseLinear& f, double t, double x, double half, double h, int steps) {
    const int m = static_cast<int>(std::round(2.0 * half / h)) + 1;
    std::vector<double> u(m), rhs(m), a(m), b(m), c(m);
    for (int j = 0; j < m; ++j) u[j] = f(-half + j * h);
    const double dt = t / steps;
    const double r = dt / (h * h);
    for (int k = 0; k < steps; ++k) {
        for (int j = 1; j + 1 < m; ++j) rhs[j] = u[j] + 0.5 * r * (u[j - 1] - 2 * u[j] + u[j + 1]);
        rhs[0] = u[0];
        rhs[m - 1] = u[m - 1];
        for (int j = 0; j < m; ++j) {
            a[j] = (j == 0 || j == m - 1) ? 0.0 : -0.5 * r;
            c[j] = a[j];
            b[j] = (j == 0 || j == m - 1) ? 1.0 : 1.0 + r;
        }
        for (int j = 1; j < m; ++j) {
            const double w = a[j] / b[j - 1];
            b[j] -= w * c[j - 1];
            rhs[j] -= w * rhs[j - 1];
        }
        u[m - 1] = rhs[m - 1] / b[m - 1];
        for (int j = m - 2; j >= 0; --j) u[j] = (rhs[j] - c[j] * u[j + 1]) / b[j];
    }
    const int j = static_cast<int>(std::round((x + half) / h));
    return u[j];
}

}  // namespace

TEST_CASE("piecewise-linear data") {
    const PiecewiseLinear f = tent();
    CHECK(f(0.0) == doctest::Approx(-0.6));
    CHECK(f(0.5) == doctest::Approx(2.9));
    CHECK(f(2.0) == doctest::Approx(5.4));
    CHECK(f.second_derivative_mass() == doctest::Approx(13.0));
    CHECK(f.max_value_jump() == doctest::Approx(0.0));
    const PiecewiseLinear g = f.shifted(0.5, -1.0, 1.0);
    CHECK(g(0.5) == doctest::Approx(1.9));
    CHECK(g(0.5 + 1e-12) == doctest::Approx(3.9));
    CHECK(g.max_value_jump() == doctest::Approx(2.0));
    CHECK_THROWS(PiecewiseLinear({{-kInf, 0.0, 1.0, 0.0}, {0.5, kInf, 1.0, 0.0}}));
}

TEST_CASE("heat_exact matches Gaussian quadrature") {
    const PiecewiseLinear f = tent();
    for (double t : {1e-4, 0.01, 0.1, 1.0}) {
        for (double x : {-1.0, 0.0, 0.3, 1.0, 2.5}) {
            const double q = oracle::line([&](double y) { return eval_heat(t, x - y) * f(y); }, {0.0, 1.0});
            CHECK(heat_exact(f, t, x) == doctest::Approx(q).epsilon(1e-11).scale(1.0));
        }
    }
    CHECK_THROWS(heat_exact(f, 0.0, 0.0));
}

TEST_CASE("heat_exact agrees with a fine Crank-Nicolson solve") {
    const PiecewiseLinear f = tent();
    const double t = 0.1;
    for (double x : {-0.5, 0.0, 0.5, 1.0}) {
        const double cn = crank_nicolson(f, t, x, 6.0, 0.0025, 400);
        CHECK(heat_exact(f, t, x) == doctest::Approx(cn).epsilon(1e-5).scale(1.0));
    }
}

TEST_CASE("linear data is stationary") {
    const PiecewiseLinear line({{-kInf, kInf, 3.0, -2.0}});
    CHECK(heat_exact(line, 0.7, 1.3) == doctest::Approx(1.9));
}
