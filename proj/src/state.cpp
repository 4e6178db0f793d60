#include "fbd/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fbd {

std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::LM: return "LM";
        case Mode::RM: return "RM";
        case Mode::ST: return "ST";
        case Mode::None: break;
    }
    return "none";
}

bool AdmissibilityReport::pass() const {
    return std::all_of(conditions.begin(), conditions.end(),
                       [](const ConditionResult& c) { return c.pass; });
}

std::string AdmissibilityReport::summary() const {
    static constexpr std::array<const char*, 4> names{"regularity", "jump", "sign-bounds",
                                                      "majorant"};
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < conditions.size(); ++i) {
        if (conditions[i].pass) continue;
        if (!first) out << ", ";
        out << names[i] << " (violation " << conditions[i].violation << " at x="
            << conditions[i].where << ")";
        first = false;
    }
    return out.str();
}

namespace {

double sgn_left(double x, double xi) { return x <= xi ? -1.0 : 1.0; }

// The tracked point may have been snapped onto a grid node.
bool tracks(const ProfileFn& u, double xi) {
    const auto& tr = u.tracked();
    return tr && std::abs(tr->pos - xi) <= snap_tolerance(u.domain());
}

void record(ConditionResult& c, double amount, double x) {
    if (amount > c.violation) {
        c.violation = amount;
        c.where = x;
    }
}

}  // namespace

ProfileFn to_p(const SimState& state, double tol) {
    const ProfileFn& u = state.u;
    const auto& tr = u.tracked();
    if (!tracks(u, state.xi)) {
        throw AdmissibilityError("profile does not track the interface position");
    }
    if (std::abs(tr->jump() - kJump) > tol) {
        std::ostringstream msg;
        msg << "jump at the interface is " << tr->jump() << ", not 2: p would be discontinuous";
        throw AdmissibilityError(msg.str());
    }
    const Domain& d = u.domain();
    std::vector<double> s(d.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = u.samples()[j] - sgn_left(d.x(j), tr->pos);
    const double at_xi = 0.5 * ((tr->left + 1.0) + (tr->right - 1.0));
    return ProfileFn(d, std::move(s), Interface{tr->pos, at_xi, at_xi});
}

ProfileFn from_p(const ProfileFn& p, double xi) {
    const Domain& d = p.domain();
    std::vector<double> s(d.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = p.samples()[j] + sgn_left(d.x(j), xi);
    double at_xi = p(xi);
    if (tracks(p, xi)) at_xi = p.tracked()->left;
    return ProfileFn(d, std::move(s), Interface{xi, at_xi - 1.0, at_xi + 1.0});
}

AdmissibilityReport check_admissible(const SimState& state, double tol) {
    AdmissibilityReport rep;
    rep.tol = tol;
    const ProfileFn& u = state.u;
    const Domain& d = u.domain();
    auto& reg = rep.conditions[0];
    auto& jump = rep.conditions[1];
    auto& sign = rep.conditions[2];
    auto& major = rep.conditions[3];

    const auto gb = u.growth_bound();
    if (!std::isfinite(gb.a) || !std::isfinite(gb.b)) record(reg, INFINITY, 0.0);

    const auto& tr = u.tracked();
    double left = 0.0;
    double right = 0.0;
    if (!tracks(u, state.xi)) {
        record(jump, INFINITY, state.xi);
        left = u(state.xi);
        right = u.right_value(state.xi);
    } else {
        left = tr->left;
        right = tr->right;
        record(jump, std::abs(tr->jump() - kJump), tr->pos);
    }

    const double xi = tracks(u, state.xi) ? tr->pos : state.xi;
    record(sign, std::max(0.0, left), xi);
    record(sign, std::max(0.0, kUFloor - left), xi);
    record(sign, std::max(0.0, -right), xi);
    record(major, std::max(0.0, right - kJump), xi);
    for (std::size_t j = 0; j < d.size(); ++j) {
        const double x = d.x(j);
        const double v = u.samples()[j];
        if (x <= xi) {
            record(sign, std::max(0.0, v), x);
            record(sign, std::max(0.0, kUFloor - v), x);
        } else {
            record(sign, std::max(0.0, -v), x);
            record(major, std::max(0.0, v - state.alpha * (x - xi) - kJump), x);
        }
    }
    if (d.is_whole_line() && u.right_slope() > state.alpha + tol) {
        // the linear extrapolant eventually crosses any weaker majorant
        record(major, INFINITY, INFINITY);
    }
    if (d.is_whole_line() && std::abs(u.left_slope()) > tol) {
        // a sloped left tail leaves [-2, 0] somewhere
        record(sign, INFINITY, -INFINITY);
    }
    for (auto& c : rep.conditions) c.pass = !(c.violation > tol);
    return rep;
}

double min_alpha(const SimState& state) {
    const ProfileFn& u = state.u;
    const Domain& d = u.domain();
    const double xi = tracks(u, state.xi) ? u.tracked()->pos : state.xi;
    double best = 0.0;
    if (tracks(u, xi) && u.tracked()->right > kJump) {
        return INFINITY;
    }
    for (std::size_t j = 0; j < d.size(); ++j) {
        const double x = d.x(j);
        if (x <= xi) continue;
        best = std::max(best, (u.samples()[j] - kJump) / (x - xi));
    }
    if (d.is_whole_line() && d.right() > xi) best = std::max(best, u.right_slope());
    return best;
}

}  // namespace fbd
