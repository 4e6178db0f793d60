#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fbd/grid.hpp"

namespace fbd {

/// Exact one-sided values at a tracked point. A continuous function may still
/// carry a tracked node (left == right) so that kinks survive resampling.
struct Interface {
    double pos;
    double left;
    double right;

    double jump() const { return right - left; }
};

/// Linear-growth witnesses: |f(x)| <= a + b|x| on the whole line.
struct GrowthBound {
    double a;
    double b;
};

/// Grid samples plus at most one tracked discontinuity.
///
/// Between nodes the function is the linear interpolant of the samples; the
/// cell holding the tracked point is split there and uses the exact limits.
/// Evaluation is left-continuous: f(pos) is the left limit, and a grid
/// sample that coincides with pos stores the left limit as well.
class ProfileFn {
public:
    ProfileFn(Domain domain, std::vector<double> samples, std::optional<Interface> tracked = {});

    /// Samples `fn` on the grid. If a tracked point is given, its limits are
    /// taken from the Interface argument, not from `fn`.
    static ProfileFn sample(const Domain& domain, const std::function<double(double)>& fn,
                            std::optional<Interface> tracked = {});

    const Domain& domain() const { return domain_; }
    const std::vector<double>& samples() const { return samples_; }
    const std::optional<Interface>& tracked() const { return tracked_; }
    bool has_jump() const { return tracked_ && tracked_->left != tracked_->right; }

    double operator()(double x) const;

    /// One-sided limit from the right; differs from operator() only at the
    /// tracked point.
    double right_value(double x) const;

    /// Interpolation nodes: grid points plus the tracked point (if it is not
    /// already a grid point), with the continuous part's value there.
    struct Nodes {
        std::vector<double> x;
        std::vector<double> value;
    };

    /// Nodes of f - (J/2) sgn(. - pos), a continuous piecewise-linear function.
    Nodes continuous_part() const;

    /// Slopes of the linear extrapolants beyond either end of the grid.
    double left_slope() const;
    double right_slope() const;

    GrowthBound growth_bound() const;

    /// Same function sampled on a domain widened by `extra` on one side; the
    /// new samples follow the linear extrapolant.
    ProfileFn extended(double extra_left, double extra_right) const;

    /// Pointwise linear combination a*f + b*g; both must share the domain and
    /// tracked position.
    friend ProfileFn combine(double a, const ProfileFn& f, double b, const ProfileFn& g);

private:
    double interp_cell(std::size_t j, double x, bool right_side) const;

    Domain domain_;
    std::vector<double> samples_;
    std::optional<Interface> tracked_;
    std::size_t tracked_cell_ = 0;
    bool tracked_on_node_ = false;
};

ProfileFn combine(double a, const ProfileFn& f, double b, const ProfileFn& g);

/// Largest |f(x_j) - g(x_j)| over grid points.
double sup_distance(const ProfileFn& f, const ProfileFn& g);

/// Largest |f| over grid samples and tracked limits.
double sup_norm(const ProfileFn& f);

/// Composite trapezoid over the grid cells, splitting the tracked cell.
double integrate(const ProfileFn& f);

}  // namespace fbd
