#pragma once

// Independent integration for oracles: adaptive Gauss-Kronrod on finite
// pieces and exp-sinh on half lines.

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

inline double gk(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

/// Integral over the real line, split at the given breakpoints (sorted).
inline double line(const std::function<double(double)>& f, std::vector<double> cuts) {
    boost::math::quadrature::exp_sinh<double> es;
    const double inf = std::numeric_limits<double>::infinity();
    double total = es.integrate([&](double s) { return f(cuts.back() + s); }, 0.0, inf);
    total += es.integrate([&](double s) { return f(cuts.front() - s); }, 0.0, inf);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += gk(f, cuts[i], cuts[i + 1]);
    return total;
}

}  // namespace oracle
