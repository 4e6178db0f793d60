#include "fbd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fbd {

Epsilon::Epsilon(double eps) : eps_(eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw std::invalid_argument("eps must be a positive finite number");
    }
}

Epsilon Epsilon::from_dt(double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step eps^2 must be positive");
    return Epsilon(std::sqrt(dt));
}

std::string_view to_string(DomainKind kind) {
    return kind == DomainKind::WholeLine ? "analytic" : "fd-neumann";
}

DomainKind domain_kind_from_string(std::string_view name) {
    if (name == "analytic" || name == "whole-line") return DomainKind::WholeLine;
    if (name == "fd-neumann" || name == "bounded-neumann") return DomainKind::BoundedNeumann;
    throw std::invalid_argument("unknown backend '" + std::string(name) +
                                "' (expected analytic or fd-neumann)");
}

Domain::Domain(DomainKind kind, double left, double right, double h)
    : kind_(kind), left_(left), right_(right), h_(h), cells_(0) {
    if (!(right > left)) throw std::invalid_argument("domain requires left < right");
    if (!(h > 0.0)) throw std::invalid_argument("grid spacing h must be positive");
    const double ratio = (right - left) / h;
    const double cells = std::round(ratio);
    if (cells < 2.0 || std::abs(cells - ratio) > 1e-6 * std::max(1.0, ratio)) {
        std::ostringstream msg;
        msg << "grid spacing h=" << h << " does not divide the domain width " << (right - left);
        throw std::invalid_argument(msg.str());
    }
    cells_ = static_cast<std::size_t>(cells);
    h_ = (right - left) / cells;
}

double Domain::x(std::size_t j) const {
    if (j == cells_) return right_;
    return left_ + (right_ - left_) * (static_cast<double>(j) / static_cast<double>(cells_));
}

std::size_t Domain::cell_of(double x) const {
    const double s = std::floor((x - left_) / h_);
    if (!(s > 0.0)) return 0;
    auto j = static_cast<std::size_t>(s);
    if (j >= cells_) return cells_ - 1;
    // floor can land one cell off near a grid point
    if (x < this->x(j) && j > 0) --j;
    if (j + 1 < cells_ && x > this->x(j + 1)) ++j;
    return j;
}

std::size_t Domain::node_near(double x, double tol) const {
    const double s = std::round((x - left_) / h_);
    if (s < 0.0 || s > static_cast<double>(cells_)) return size();
    auto j = static_cast<std::size_t>(s);
    return std::abs(this->x(j) - x) <= tol ? j : size();
}

void Domain::require_resolves(const Epsilon& eps) const {
    if (h_ > eps.value() / 4.0 * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "grid spacing h=" << h_ << " under-resolves the kernel: need h <= eps/4 = "
            << eps.value() / 4.0;
        throw std::invalid_argument(msg.str());
    }
}

double snap_tolerance(const Domain& domain) { return 1e-12 * domain.width(); }

}  // namespace fbd
