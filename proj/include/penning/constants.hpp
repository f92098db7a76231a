#ifndef PENNING_CONSTANTS_HPP
#define PENNING_CONSTANTS_HPP

#include <numbers>

namespace penning {

/// CODATA 2018 values. Everything in the library is SI with angular
/// frequencies in rad/s; conversion from ordinary kHz happens only at the
/// config boundary through khz_to_rad_s().
namespace constants {
inline constexpr double elementary_charge = 1.602176634e-19;  // C (exact)
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double hbar = 1.054571817e-34;                // J s
inline constexpr double two_pi = 2.0 * std::numbers::pi;
}  // namespace constants

inline constexpr double khz_to_rad_s(double f_khz) { return constants::two_pi * 1e3 * f_khz; }
inline constexpr double rad_s_to_khz(double omega) { return omega / (constants::two_pi * 1e3); }

inline constexpr double um_to_m(double um) { return um * 1e-6; }
inline constexpr double m_to_um(double m) { return m * 1e6; }

}  // namespace penning

#endif
