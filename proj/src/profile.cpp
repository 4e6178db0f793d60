#include "fbd/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fbd {

ProfileFn::ProfileFn(Domain domain, std::vector<double> samples, std::optional<Interface> tracked)
    : domain_(std::move(domain)), samples_(std::move(samples)), tracked_(tracked) {
    if (samples_.size() != domain_.size()) {
        throw std::invalid_argument("profile sample count does not match the grid");
    }
    for (double v : samples_) {
        if (!std::isfinite(v)) throw std::invalid_argument("profile samples must be finite");
    }
    if (!tracked_) return;
    Interface& tr = *tracked_;
    if (!std::isfinite(tr.pos) || !std::isfinite(tr.left) || !std::isfinite(tr.right)) {
        throw std::invalid_argument("tracked point must have finite position and limits");
    }
    if (!domain_.contains(tr.pos)) {
        throw std::invalid_argument("tracked point lies outside the grid");
    }
    const std::size_t k = domain_.node_near(tr.pos, snap_tolerance(domain_));
    if (k < domain_.size()) {
        tracked_on_node_ = true;
        tr.pos = domain_.x(k);
        samples_[k] = tr.left;
        tracked_cell_ = k;
    } else {
        tracked_cell_ = domain_.cell_of(tr.pos);
    }
}

ProfileFn ProfileFn::sample(const Domain& domain, const std::function<double(double)>& fn,
                            std::optional<Interface> tracked) {
    std::vector<double> s(domain.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = fn(domain.x(j));
    return ProfileFn(domain, std::move(s), tracked);
}

double ProfileFn::interp_cell(std::size_t j, double x, bool right_side) const {
    double xa = domain_.x(j);
    double xb = domain_.x(j + 1);
    double fa = samples_[j];
    double fb = samples_[j + 1];
    if (tracked_ && !tracked_on_node_ && j == tracked_cell_) {
        if (x < tracked_->pos || (x == tracked_->pos && !right_side)) {
            xb = tracked_->pos;
            fb = tracked_->left;
        } else {
            xa = tracked_->pos;
            fa = tracked_->right;
        }
    } else if (tracked_ && tracked_on_node_ && j == tracked_cell_ && x > xa) {
        fa = tracked_->right;
    }
    if (xb == xa) return fa;
    const double w = (x - xa) / (xb - xa);
    return fa + w * (fb - fa);
}

double ProfileFn::operator()(double x) const {
    if (tracked_ && x == tracked_->pos) return tracked_->left;
    const double lo = domain_.left();
    const double hi = domain_.right();
    if (x < lo) {
        if (!domain_.is_whole_line()) return samples_.front();
        return samples_.front() + left_slope() * (x - lo);
    }
    if (x > hi) {
        if (!domain_.is_whole_line()) return samples_.back();
        return samples_.back() + right_slope() * (x - hi);
    }
    return interp_cell(domain_.cell_of(x), x, false);
}

double ProfileFn::right_value(double x) const {
    if (tracked_ && x == tracked_->pos) return tracked_->right;
    return (*this)(x);
}

double ProfileFn::left_slope() const {
    const double x1 = domain_.x(1);
    double xa = domain_.x(0);
    double fa = samples_.front();
    if (tracked_ && tracked_cell_ == 0 && !tracked_on_node_) {
        xa = tracked_->pos;
        fa = tracked_->right;
    } else if (tracked_ && tracked_cell_ == 0) {
        fa = tracked_->right;
    }
    if (x1 == xa) return 0.0;
    return (samples_[1] - fa) / (x1 - xa);
}

double ProfileFn::right_slope() const {
    const std::size_t m = domain_.cells();
    const double xa = domain_.x(m - 1);
    double xb = domain_.x(m);
    double fb = samples_.back();
    double fa = samples_[m - 1];
    if (tracked_ && tracked_cell_ == m - 1 && !tracked_on_node_) {
        xb = tracked_->pos;
        fb = tracked_->left;
    } else if (tracked_ && tracked_on_node_ && tracked_cell_ == m - 1) {
        fa = tracked_->right;
    }
    if (xb == xa) return 0.0;
    return (fb - fa) / (xb - xa);
}

ProfileFn::Nodes ProfileFn::continuous_part() const {
    Nodes nodes;
    const std::size_t n = samples_.size();
    nodes.x.reserve(n + 1);
    nodes.value.reserve(n + 1);
    const double half = tracked_ ? 0.5 * tracked_->jump() : 0.0;
    const double pos = tracked_ ? tracked_->pos : 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = domain_.x(j);
        if (tracked_ && !tracked_on_node_ && j == tracked_cell_ + 1) {
            nodes.x.push_back(pos);
            nodes.value.push_back(0.5 * (tracked_->left + tracked_->right));
        }
        double v = samples_[j];
        if (tracked_) v += (x <= pos) ? half : -half;
        nodes.x.push_back(x);
        nodes.value.push_back(v);
    }
    return nodes;
}

GrowthBound ProfileFn::growth_bound() const {
    const double b = std::max(std::abs(left_slope()), std::abs(right_slope()));
    double m = 0.0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    if (tracked_) m = std::max({m, std::abs(tracked_->left), std::abs(tracked_->right)});
    const double reach = std::max(std::abs(domain_.left()), std::abs(domain_.right()));
    return {m + b * reach, b};
}

ProfileFn ProfileFn::extended(double extra_left, double extra_right) const {
    const double h = domain_.h();
    const double add_l = std::ceil(std::max(0.0, extra_left) / h - 1e-9) * h;
    const double add_r = std::ceil(std::max(0.0, extra_right) / h - 1e-9) * h;
    Domain wider(domain_.kind(), domain_.left() - add_l, domain_.right() + add_r, h);
    const Domain whole = wider.with_kind(DomainKind::WholeLine);
    ProfileFn as_line(domain_.with_kind(DomainKind::WholeLine), samples_, tracked_);
    std::vector<double> s(wider.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = as_line(whole.x(j));
    return ProfileFn(wider, std::move(s), tracked_);
}

ProfileFn combine(double a, const ProfileFn& f, double b, const ProfileFn& g) {
    if (!(f.domain() == g.domain())) throw std::invalid_argument("combine: domains differ");
    const auto& tf = f.tracked();
    const auto& tg = g.tracked();
    if (tf && tg && tf->pos != tg->pos) {
        throw std::invalid_argument("combine: tracked positions differ");
    }
    std::vector<double> s(f.samples().size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = a * f.samples()[j] + b * g.samples()[j];
    std::optional<Interface> tr;
    if (tf || tg) {
        const double pos = tf ? tf->pos : tg->pos;
        const double fl = tf ? tf->left : f(pos);
        const double fr = tf ? tf->right : f(pos);
        const double gl = tg ? tg->left : g(pos);
        const double gr = tg ? tg->right : g(pos);
        tr = Interface{pos, a * fl + b * gl, a * fr + b * gr};
    }
    return ProfileFn(f.domain(), std::move(s), tr);
}

double sup_distance(const ProfileFn& f, const ProfileFn& g) {
    if (f.samples().size() != g.samples().size()) {
        throw std::invalid_argument("sup_distance: sample counts differ");
    }
    double d = 0.0;
    for (std::size_t j = 0; j < f.samples().size(); ++j) {
        d = std::max(d, std::abs(f.samples()[j] - g.samples()[j]));
    }
    return d;
}

double sup_norm(const ProfileFn& f) {
    double m = 0.0;
    for (double v : f.samples()) m = std::max(m, std::abs(v));
    if (f.tracked()) m = std::max({m, std::abs(f.tracked()->left), std::abs(f.tracked()->right)});
    return m;
}

double integrate(const ProfileFn& f) {
    const Domain& d = f.domain();
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < d.size(); ++j) {
        const double xa = d.x(j);
        const double xb = d.x(j + 1);
        const auto& tr = f.tracked();
        if (tr && tr->pos > xa && tr->pos < xb) {
            total += 0.5 * (tr->pos - xa) * (f.samples()[j] + tr->left);
            total += 0.5 * (xb - tr->pos) * (tr->right + f.samples()[j + 1]);
        } else {
            total += 0.5 * (xb - xa) * (f.right_value(xa) + f.samples()[j + 1]);
        }
    }
    return total;
}

}  // namespace fbd
