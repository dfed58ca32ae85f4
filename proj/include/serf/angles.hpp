#ifndef SERF_ANGLES_HPP
#define SERF_ANGLES_HPP

#include <cmath>

#include "serf/constants.hpp"

namespace serf {

/// Continuous branch of arctan(k * tan(x)) for k > 0.
///
/// The principal arctan jumps by pi whenever x crosses an odd multiple of
/// pi/2; this version follows the branch that keeps the result continuous
/// and strictly increasing in x, with A(k, 0) = 0 and A(k, x + pi) =
/// A(k, x) + pi. Evaluated through atan2 so the tangent poles are regular
/// points (no non-finite intermediates).
inline double scaled_tan_angle(double k, double x) {
    const double m = std::round(x / kPi);
    const double x0 = x - m * kPi;  // in [-pi/2, pi/2], cos(x0) >= 0
    return std::atan2(k * std::sin(x0), std::cos(x0)) + m * kPi;
}

/// Wrap an angle to (-pi, pi].
inline double principal_angle(double a) {
    a = std::remainder(a, kTwoPi);
    if (a <= -kPi) a += kTwoPi;
    return a;
}

/// Smallest signed difference a - b on the circle.
inline double angle_difference(double a, double b) {
    return principal_angle(a - b);
}

}  // namespace serf

#endif
