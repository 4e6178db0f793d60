#include "fbd/heat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fbd {

PiecewiseLinear::PiecewiseLinear(std::vector<LinearPiece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw std::invalid_argument("piecewise-linear data needs a piece");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& p = pieces_[i];
        if (!(p.to > p.from)) throw std::invalid_argument("piece with empty interval");
        if (!std::isfinite(p.slope) || !std::isfinite(p.intercept)) {
            throw std::invalid_argument("piece coefficients must be finite");
        }
        if (i > 0 && pieces_[i - 1].to != p.from) {
            throw std::invalid_argument("pieces must be contiguous");
        }
    }
    pieces_.front().from = -INFINITY;
    pieces_.back().to = INFINITY;
}

double PiecewiseLinear::operator()(double x) const {
    for (const auto& p : pieces_) {
        if (x <= p.to) return p(x);
    }
    return pieces_.back()(x);
}

double PiecewiseLinear::second_derivative_mass() const {
    double total = 0.0;
    for (std::size_t i = 1; i < pieces_.size(); ++i) {
        total += std::abs(pieces_[i].slope - pieces_[i - 1].slope);
    }
    return total;
}

double PiecewiseLinear::max_value_jump() const {
    double m = 0.0;
    for (std::size_t i = 1; i < pieces_.size(); ++i) {
        const double at = pieces_[i].from;
        m = std::max(m, std::abs(pieces_[i](at) - pieces_[i - 1](at)));
    }
    return m;
}

PiecewiseLinear PiecewiseLinear::shifted(double at, double delta_left, double delta_right) const {
    std::vector<LinearPiece> out;
    for (const auto& p : pieces_) {
        if (p.to <= at) {
            out.push_back({p.from, p.to, p.slope, p.intercept + delta_left});
        } else if (p.from >= at) {
            out.push_back({p.from, p.to, p.slope, p.intercept + delta_right});
        } else {
            out.push_back({p.from, at, p.slope, p.intercept + delta_left});
            out.push_back({at, p.to, p.slope, p.intercept + delta_right});
        }
    }
    return PiecewiseLinear(std::move(out));
}

namespace {

double normal_cdf(double z) {
    if (z == INFINITY) return 1.0;
    if (z == -INFINITY) return 0.0;
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_pdf(double z) {
    if (!std::isfinite(z)) return 0.0;
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

double heat_exact(const PiecewiseLinear& data, double t, double x) {
    if (!(t > 0.0)) throw std::invalid_argument("heat_exact needs t > 0");
    // q(t,x) = E[p(x + sigma Z)] with sigma = sqrt(2t)
    const double sigma = std::sqrt(2.0 * t);
    double total = 0.0;
    for (const auto& p : data.pieces()) {
        const double zl = (p.from - x) / sigma;
        const double zr = (p.to - x) / sigma;
        // mass of the piece: upper tail minus lower tail, whichever is more precise
        const double mass = zl > 0.0 ? normal_cdf(-zl) - normal_cdf(-zr)
                                     : normal_cdf(zr) - normal_cdf(zl);
        total += p(x) * mass + p.slope * sigma * (normal_pdf(zl) - normal_pdf(zr));
    }
    return total;
}

}  // namespace fbd
