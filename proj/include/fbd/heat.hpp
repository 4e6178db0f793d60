#pragma once

#include <vector>

namespace fbd {

/// One linear piece slope * x + intercept on [from, to]; the ends may be
/// infinite.
struct LinearPiece {
    double from;
    double to;
    double slope;
    double intercept;

    double operator()(double x) const { return slope * x + intercept; }
};

/// Piecewise-linear function on the whole line, pieces sorted and contiguous.
/// The first and last pieces extend to -inf and +inf.
class PiecewiseLinear {
public:
    explicit PiecewiseLinear(std::vector<LinearPiece> pieces);

    const std::vector<LinearPiece>& pieces() const { return pieces_; }

    /// Left-continuous evaluation.
    double operator()(double x) const;

    /// Total variation of the derivative: the sum of |slope jumps|. Value
    /// jumps are not allowed here since the result would not be finite.
    double second_derivative_mass() const;

    /// Largest jump in value between neighbouring pieces.
    double max_value_jump() const;

    /// The same function with `delta_left` added on x <= at and
    /// `delta_right` on x > at; a piece straddling `at` is split.
    PiecewiseLinear shifted(double at, double delta_left, double delta_right) const;

private:
    std::vector<LinearPiece> pieces_;
};

/// Solution of the heat equation q_t = q_xx on the whole line at time t with
/// piecewise-linear initial data, assembled piece by piece from erf and
/// Gaussian primitives. Throws for t <= 0.
double heat_exact(const PiecewiseLinear& data, double t, double x);

}  // namespace fbd
