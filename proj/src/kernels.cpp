#include "fbd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fbd {

double eval_g(const Epsilon& eps, double x) {
    const double e = eps.value();
    return std::exp(-std::abs(x) / e) / (2.0 * e);
}

double eval_s(const Epsilon& eps, double x) {
    const double e = eps.value();
    return x <= 0.0 ? -std::exp(x / e) : std::exp(-x / e);
}

double eval_g_sgn(const Epsilon& eps, double x) {
    const double e = eps.value();
    return x <= 0.0 ? std::expm1(x / e) : -std::expm1(-x / e);
}

double eval_heat(double t, double x) {
    if (!(t > 0.0)) throw std::invalid_argument("heat kernel needs t > 0");
    return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

double eval_heps(const Epsilon& eps, double t, double x) {
    if (t <= 0.0) return 0.0;
    const double dt = eps.dt();
    if (t <= dt) return (t / dt) * eval_heat(dt, x);
    return eval_heat(t, x);
}

namespace {

/// Weights of the exponential moments over one linear segment of length
/// z = L/eps: one_minus_e = 1 - e^{-z}, ramp = (z - 1 + e^{-z}) / z.
struct SegmentWeights {
    double decay;
    double one_minus_e;
    double ramp;
};

SegmentWeights segment_weights(double z) {
    SegmentWeights w{};
    w.decay = std::exp(-z);
    w.one_minus_e = -std::expm1(-z);
    if (z < 0.1) {
        // sum_{k>=2} (-1)^k z^{k-1} / k!
        double term = 0.5 * z;
        double sum = term;
        for (int k = 3; k < 16; ++k) {
            term *= -z / k;
            sum += term;
        }
        w.ramp = sum;
    } else {
        w.ramp = (z + std::expm1(-z)) / z;
    }
    return w;
}

class WeightCache {
public:
    explicit WeightCache(double eps) : eps_(eps) {}
    const SegmentWeights& operator()(double length) {
        if (length != last_) {
            last_ = length;
            w_ = segment_weights(length / eps_);
        }
        return w_;
    }

private:
    double eps_;
    double last_ = -1.0;
    SegmentWeights w_{};
};

// Integral over one segment of a linear function against an exponential
// weight that peaks (value 1) at the end where the function equals `head`.
double moment(double eps, const SegmentWeights& w, double tail, double head) {
    return eps * (tail * w.one_minus_e + (head - tail) * w.ramp);
}

}  // namespace

Smoothed::Smoothed(const Epsilon& eps, const ProfileFn& f) : eps_(eps), domain_(f.domain()) {
    if (f.tracked()) {
        jump_pos_ = f.tracked()->pos;
        half_jump_ = 0.5 * f.tracked()->jump();
    }
    ProfileFn::Nodes nodes = f.continuous_part();
    const double e = eps.value();
    if (!domain_.is_whole_line()) {
        // the three-point stencil sees grid samples only
        std::vector<double> rhs(domain_.size());
        std::size_t k = 0;
        for (std::size_t j = 0; j < nodes.x.size(); ++j) {
            if (k < rhs.size() && nodes.x[j] == domain_.x(k)) rhs[k++] = nodes.value[j];
        }
        const double r = eps.dt() / (domain_.h() * domain_.h());
        solved_ = solve_neumann(r, rhs);
        return;
    }
    const auto gb = f.growth_bound();
    if (!std::isfinite(gb.a) || !std::isfinite(gb.b)) {
        throw std::invalid_argument("profile fails the linear growth check");
    }
    x_ = std::move(nodes.x);
    v_ = std::move(nodes.value);
    const std::size_t m = x_.size();
    slope_l_ = (v_[1] - v_[0]) / (x_[1] - x_[0]);
    slope_r_ = (v_[m - 1] - v_[m - 2]) / (x_[m - 1] - x_[m - 2]);
    fwd_.assign(m, 0.0);
    bwd_.assign(m, 0.0);
    fwd_[0] = e * v_[0] - e * e * slope_l_;
    bwd_[m - 1] = e * v_[m - 1] + e * e * slope_r_;
    WeightCache cache(e);
    for (std::size_t j = 1; j < m; ++j) {
        const auto& w = cache(x_[j] - x_[j - 1]);
        fwd_[j] = w.decay * fwd_[j - 1] + moment(e, w, v_[j - 1], v_[j]);
    }
    for (std::size_t j = m - 1; j-- > 0;) {
        const auto& w = cache(x_[j + 1] - x_[j]);
        bwd_[j] = w.decay * bwd_[j + 1] + moment(e, w, v_[j + 1], v_[j]);
    }
}

double Smoothed::continuous_part(double x) const {
    const double e = eps_.value();
    if (!solved_.empty()) {
        if (x <= domain_.left()) return solved_.front();
        if (x >= domain_.right()) return solved_.back();
        const std::size_t j = domain_.cell_of(x);
        const double xa = domain_.x(j);
        const double w = (x - xa) / (domain_.x(j + 1) - xa);
        return solved_[j] + w * (solved_[j + 1] - solved_[j]);
    }
    const std::size_t m = x_.size();
    double a = 0.0;
    double b = 0.0;
    if (x <= x_.front()) {
        const double px = v_.front() + slope_l_ * (x - x_.front());
        const auto w = segment_weights((x_.front() - x) / e);
        a = e * px - e * e * slope_l_;
        b = w.decay * bwd_.front() + moment(e, w, v_.front(), px);
    } else if (x >= x_.back()) {
        const double px = v_.back() + slope_r_ * (x - x_.back());
        const auto w = segment_weights((x - x_.back()) / e);
        a = w.decay * fwd_.back() + moment(e, w, v_.back(), px);
        b = e * px + e * e * slope_r_;
    } else {
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - x_.begin()), m - 1) - 1;
        const double xa = x_[k];
        const double xb = x_[k + 1];
        const double px = v_[k] + (v_[k + 1] - v_[k]) * ((x - xa) / (xb - xa));
        const auto wl = segment_weights((x - xa) / e);
        const auto wr = segment_weights((xb - x) / e);
        a = wl.decay * fwd_[k] + moment(e, wl, v_[k], px);
        b = wr.decay * bwd_[k + 1] + moment(e, wr, v_[k + 1], px);
    }
    return (a + b) / (2.0 * e);
}

double Smoothed::jump_part(double x) const {
    if (half_jump_ == 0.0) return 0.0;
    double v = eval_g_sgn(eps_, x - jump_pos_);
    if (!domain_.is_whole_line()) {
        // images that restore zero flux at both walls
        const double e = eps_.value();
        const double lo = domain_.left();
        const double hi = domain_.right();
        const double w = hi - lo;
        const double xi = jump_pos_;
        const double num = std::exp((x - xi - 2.0 * w) / e) + std::exp((2.0 * lo - xi - x) / e) -
                           std::exp((x + xi - 2.0 * hi) / e) - std::exp((xi - x - 2.0 * w) / e);
        v += num / (-std::expm1(-2.0 * w / e));
    }
    return half_jump_ * v;
}

double Smoothed::operator()(double x) const { return continuous_part(x) + jump_part(x); }

ProfileFn Smoothed::resample(std::optional<double> node) const {
    std::vector<double> s(domain_.size());
    if (!solved_.empty()) {
        for (std::size_t j = 0; j < s.size(); ++j) s[j] = solved_[j] + jump_part(domain_.x(j));
    } else {
        const double e = eps_.value();
        std::size_t k = 0;
        for (std::size_t j = 0; j < s.size(); ++j) {
            const double xj = domain_.x(j);
            while (k < x_.size() && x_[k] < xj) ++k;
            s[j] = (fwd_[k] + bwd_[k]) / (2.0 * e) + jump_part(xj);
        }
    }
    std::optional<Interface> tr;
    if (node) {
        const double v = (*this)(*node);
        tr = Interface{*node, v, v};
    }
    ProfileFn out(domain_, std::move(s), tr);
    return out;
}

ProfileFn convolve_g(const Epsilon& eps, const ProfileFn& f) {
    Smoothed sm(eps, f);
    if (f.tracked()) return sm.resample(f.tracked()->pos);
    return sm.resample();
}

std::vector<double> solve_neumann(double r, const std::vector<double>& f) {
    const std::size_t n = f.size();
    if (n < 2) throw std::invalid_argument("Neumann solve needs at least two points");
    std::vector<double> c(n, 0.0);
    std::vector<double> d(n, 0.0);
    const double diag = 1.0 + 2.0 * r;
    c[0] = -2.0 * r / diag;
    d[0] = f[0] / diag;
    for (std::size_t i = 1; i < n; ++i) {
        const double lower = (i == n - 1) ? -2.0 * r : -r;
        const double upper = -r;
        const double denom = diag - lower * c[i - 1];
        c[i] = (i == n - 1) ? 0.0 : upper / denom;
        d[i] = (f[i] - lower * d[i - 1]) / denom;
    }
    std::vector<double> v(n);
    v[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) v[i] = d[i] - c[i] * v[i + 1];
    return v;
}

double conv_power_half_width(const Epsilon& eps, int n) {
    return 20.0 * eps.value() * std::sqrt(static_cast<double>(n));
}

ProfileFn conv_power(Kernel kernel, const Epsilon& eps, int n, const Domain& grid) {
    if (n < 1) throw std::invalid_argument("conv_power needs n >= 1");
    if (!grid.is_whole_line()) throw std::invalid_argument("conv_power needs a whole-line grid");
    const double need = conv_power_half_width(eps, n);
    if (-grid.left() < need * (1.0 - 1e-12) || grid.right() < need * (1.0 - 1e-12)) {
        std::ostringstream msg;
        msg << "grid too narrow for " << n << "-fold convolution: need [-" << need << ", " << need
            << "], have [" << grid.left() << ", " << grid.right() << "]";
        throw std::invalid_argument(msg.str());
    }
    if (kernel == Kernel::H) {
        const double t = n * eps.dt();
        return ProfileFn::sample(grid, [t](double x) { return eval_heat(t, x); });
    }
    ProfileFn power = ProfileFn::sample(grid, [&eps](double x) { return eval_g(eps, x); });
    for (int k = 1; k < n; ++k) power = convolve_g(eps, power);
    return power;
}

}  // namespace fbd
