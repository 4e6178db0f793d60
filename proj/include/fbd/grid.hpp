#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace fbd {

/// Spatial kernel scale. The time step of the scheme is eps², so one value
/// fixes both the kernel width and the temporal resolution.
class Epsilon {
public:
    explicit Epsilon(double eps);

    /// Builds the scale from the time step dt = eps².
    static Epsilon from_dt(double dt);

    double value() const { return eps_; }
    double dt() const { return eps_ * eps_; }

private:
    double eps_;
};

enum class DomainKind { WholeLine, BoundedNeumann };

std::string_view to_string(DomainKind kind);
DomainKind domain_kind_from_string(std::string_view name);

/// Uniform grid on [left, right] including both endpoints.
///
/// A whole-line domain is a finite sampling window of a function defined on
/// all of R; values outside the window follow the linear extrapolant of the
/// boundary cells. A bounded domain carries homogeneous Neumann conditions.
class Domain {
public:
    Domain(DomainKind kind, double left, double right, double h);

    static Domain whole_line(double left, double right, double h) {
        return {DomainKind::WholeLine, left, right, h};
    }
    static Domain bounded(double left, double right, double h) {
        return {DomainKind::BoundedNeumann, left, right, h};
    }

    DomainKind kind() const { return kind_; }
    bool is_whole_line() const { return kind_ == DomainKind::WholeLine; }
    double left() const { return left_; }
    double right() const { return right_; }
    double width() const { return right_ - left_; }
    double h() const { return h_; }
    std::size_t cells() const { return cells_; }
    std::size_t size() const { return cells_ + 1; }

    double x(std::size_t j) const;

    /// Index j of the cell [x_j, x_{j+1}] containing x, clamped to the grid.
    std::size_t cell_of(double x) const;

    /// Index of a grid point within `tol` of x, or size() when none.
    std::size_t node_near(double x, double tol) const;

    bool contains(double x) const { return x >= left_ && x <= right_; }

    /// Same window and spacing with a different boundary treatment.
    Domain with_kind(DomainKind kind) const { return {kind, left_, right_, h_}; }

    /// Throws std::invalid_argument unless h <= eps/4.
    void require_resolves(const Epsilon& eps) const;

    bool operator==(const Domain& other) const = default;

private:
    DomainKind kind_;
    double left_;
    double right_;
    double h_;
    std::size_t cells_;
};

/// Snapping distance used to decide that an interface sits on a grid point.
double snap_tolerance(const Domain& domain);

}  // namespace fbd
