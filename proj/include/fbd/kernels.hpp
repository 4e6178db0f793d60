#pragma once

#include <optional>
#include <vector>

#include "fbd/grid.hpp"
#include "fbd/profile.hpp"

namespace fbd {

/// Exponential kernel e^{-|x|/eps} / (2 eps), the Green's function of 1 - eps² d²/dx².
double eval_g(const Epsilon& eps, double x);

/// Jump profile: -e^{x/eps} for x <= 0, e^{-x/eps} for x > 0.
double eval_s(const Epsilon& eps, double x);

/// (g * sgn)(x), written with expm1 so small |x| keeps full precision.
double eval_g_sgn(const Epsilon& eps, double x);

/// Heat kernel e^{-x²/4t} / sqrt(4 pi t). Throws for t <= 0.
double eval_heat(double t, double x);

/// Heat kernel with a linear ramp in time over [0, eps²]; zero for t <= 0.
double eval_heps(const Epsilon& eps, double t, double x);

/// The function g * f for a profile f, evaluable at any real x.
///
/// Whole-line profiles are convolved exactly against their piecewise-linear
/// interpolant, with linear tails beyond the grid and the tracked jump split
/// off as a multiple of sgn. Bounded profiles solve the Neumann problem
/// (I - eps² D_xx) u = f with a three-point stencil for the continuous part;
/// the jump part is exact, including its boundary images.
class Smoothed {
public:
    Smoothed(const Epsilon& eps, const ProfileFn& f);

    double operator()(double x) const;

    const Domain& domain() const { return domain_; }
    const Epsilon& eps() const { return eps_; }

    /// Grid samples of g * f. A continuous tracked node is placed at `node`
    /// when given, so later convolutions keep the kink there.
    ProfileFn resample(std::optional<double> node = {}) const;

private:
    double continuous_part(double x) const;
    double jump_part(double x) const;

    Epsilon eps_;
    Domain domain_;
    double jump_pos_ = 0.0;
    double half_jump_ = 0.0;
    // whole line: node positions, values, and the two one-sided exponential
    // moments A(x) = int_{-inf}^x e^{-(x-y)/eps} p, B(x) = int_x^inf e^{-(y-x)/eps} p
    std::vector<double> x_;
    std::vector<double> v_;
    std::vector<double> fwd_;
    std::vector<double> bwd_;
    double slope_l_ = 0.0;
    double slope_r_ = 0.0;
    // bounded: solved grid values of the continuous part
    std::vector<double> solved_;
};

/// g * f resampled on the grid of f (tracked node kept in place if present).
ProfileFn convolve_g(const Epsilon& eps, const ProfileFn& f);

/// Solves the tridiagonal system (I - r D) v = f with Neumann ghost rows,
/// where D is the unscaled second difference and r = eps²/h².
std::vector<double> solve_neumann(double r, const std::vector<double>& f);

enum class Kernel { G, H };

/// n-fold self-convolution of g or of h = G0(eps², .) sampled on a whole-line
/// grid centred at 0. Throws if the grid does not reach 20 eps sqrt(n) on
/// both sides.
ProfileFn conv_power(Kernel kernel, const Epsilon& eps, int n, const Domain& grid);

/// Half-width required by conv_power for n factors.
double conv_power_half_width(const Epsilon& eps, int n);

}  // namespace fbd
