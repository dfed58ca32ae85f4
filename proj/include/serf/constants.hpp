#ifndef SERF_CONSTANTS_HPP
#define SERF_CONSTANTS_HPP

namespace serf {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// CODATA 2018
inline constexpr double kHbar = 1.054571817e-34;            // J s
inline constexpr double kElementaryCharge = 1.602176634e-19; // C
inline constexpr double kBohrRadius = 5.29177210903e-11;     // m

}  // namespace serf

#endif
