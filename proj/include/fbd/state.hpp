#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fbd/profile.hpp"

namespace fbd {

/// Propagation mode of one step: left-moving, right-moving or standing.
enum class Mode { None, LM, RM, ST };

std::string_view to_string(Mode mode);

/// Bounds of the bilinear law: phases u <= 0 and u >= 0, interface values of
/// p confined to [p_lower, p_upper], and admissible u bounded below by u_floor.
inline constexpr double kPLower = -1.0;
inline constexpr double kPUpper = 1.0;
inline constexpr double kUFloor = -2.0;
inline constexpr double kJump = 2.0;

struct SimState {
    ProfileFn u;
    double xi;
    int n = 0;
    double alpha = 0.0;
    Mode mode_last = Mode::None;

    double time(double dt) const { return n * dt; }
};

/// Raised when a state breaks the single-interface structure badly enough
/// that the requested operation has no meaning.
class AdmissibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConditionResult {
    bool pass = true;
    double violation = 0.0;  // worst amount by which the condition fails, 0 if none
    double where = 0.0;      // location of the worst violation
};

/// The four admissibility conditions: regularity with linear growth, a jump
/// of exactly 2 at xi, the sign bounds (-2 <= u <= 0 left, u >= 0 right) and
/// the linear majorant u <= alpha (x - xi) + 2 right of xi.
struct AdmissibilityReport {
    std::array<ConditionResult, 4> conditions{};
    double tol = 0.0;

    bool pass() const;
    /// Names of failing conditions, comma separated; empty when all pass.
    std::string summary() const;
};

/// p = u - sgn(. - xi), tracked at xi as a continuous node. Throws
/// AdmissibilityError when the jump of u differs from 2 by more than `tol`.
ProfileFn to_p(const SimState& state, double tol = 1e-9);

/// u = p + sgn(. - xi) with limits p(xi) -+ 1 at xi.
ProfileFn from_p(const ProfileFn& p, double xi);

AdmissibilityReport check_admissible(const SimState& state, double tol);

/// Smallest slope alpha >= 0 with u <= alpha (x - xi) + 2 right of xi. On a
/// whole-line domain the linear extrapolant beyond the grid counts too.
double min_alpha(const SimState& state);

}  // namespace fbd
