#ifndef PENNING_DRIVE_RESPONSE_HPP
#define PENNING_DRIVE_RESPONSE_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "penning/axialization_drive.hpp"
#include "penning/errors.hpp"
#include "penning/laser_cooling.hpp"
#include "penning/trap.hpp"

namespace penning {

using cdouble = std::complex<double>;

/// Which free mode the dipole drive sits next to.
///
/// cyclotron: omega_d = omega_c' + Delta + delta. A is the cyclotron component
///   and B the magnetron-side component at omega_m + Delta - delta.
/// magnetron: omega_d = omega_m + Delta + delta. A is the magnetron component and
///   B sits at omega_c' + Delta - delta.
///
/// In both cases u = x + i y contains A exp(i omega_d t) + B exp(i (omega_a - omega_d) t).
enum class ExcitationSide { cyclotron, magnetron };

/// Dipole drive a_x = 2 F cos(omega_d t); only its co-rotating half is resonant.
struct ExcitationDrive {
  double force_amplitude = 1.0;    // F, m/s^2
  double rotating_detuning = 0.0;  // delta, rad/s
  ExcitationSide side = ExcitationSide::cyclotron;

  double lab_frequency(const TrapFrequencies& fr, const AxializationDrive& drive) const {
    const double base = side == ExcitationSide::cyclotron ? fr.omega_c_prime : fr.omega_m;
    return base + drive.half_detuning + rotating_detuning;
  }

  static ExcitationDrive at_lab_frequency(double F, double omega_d, const TrapFrequencies& fr,
                                          const AxializationDrive& drive, ExcitationSide side) {
    const double base = side == ExcitationSide::cyclotron ? fr.omega_c_prime : fr.omega_m;
    return {F, omega_d - base - drive.half_detuning, side};
  }
};

/// Frequency of the B component for a drive at omega_d.
inline double partner_frequency(const TrapFrequencies& fr, const AxializationDrive& drive, double omega_d) {
  return drive.drive_frequency(fr) - omega_d;
}

struct ResponseCoefficients {
  cdouble C_m;
  cdouble C_c;
};

/// delta may be complex; a free mode exp(i (omega + i gamma) t) has delta + i gamma.
inline ResponseCoefficients response_coefficients(const CoolingCoefficients& co, const TrapFrequencies& fr,
                                                  double half_detuning, cdouble delta, ExcitationSide side) {
  const double w1 = fr.omega_1;
  const double D = half_detuning;
  const cdouble i(0.0, 1.0);
  if (side == ExcitationSide::cyclotron) {
    return {-2.0 * delta * w1 + i * co.beta * w1 - 2.0 * D * w1 - i * co.alpha + i * co.beta * fr.omega_c / 2.0,
            -2.0 * delta * w1 + i * co.beta * w1 + 2.0 * D * w1 + i * co.alpha - i * co.beta * fr.omega_c / 2.0};
  }
  return {2.0 * w1 * (delta + D) - i * co.beta * w1 - i * co.M * w1,
          2.0 * w1 * (delta - D) - i * co.beta * w1 + i * co.M * w1};
}

struct ResponseSolution {
  cdouble A;
  cdouble B;
  cdouble C_m;
  cdouble C_c;
};

inline constexpr double default_singular_floor = 1e-13;

inline ResponseSolution response(const CoolingCoefficients& co, const TrapFrequencies& fr,
                                 const AxializationDrive& drive, const ExcitationDrive& exc,
                                 double singular_floor = default_singular_floor) {
  const auto [C_m, C_c] = response_coefficients(co, fr, drive.half_detuning, exc.rotating_detuning, exc.side);
  const double eps2 = drive.epsilon * drive.epsilon;
  const cdouble den = C_m * C_c - eps2;
  const double scale = std::max(std::norm(C_m), std::norm(C_c)) + eps2;
  if (!(std::abs(den) > singular_floor * scale)) {
    throw SingularResponseError("undamped resonance: |C_m C_c - eps^2| below floor");
  }
  const double F = exc.force_amplitude;
  return {F * C_c / den, F * drive.epsilon / (eps2 - std::conj(C_m) * std::conj(C_c)), C_m, C_c};
}

/// |B/A| for a drive whose A component sits at mode_frequency.
inline double amplitude_ratio(const CoolingCoefficients& co, const TrapFrequencies& fr,
                              const AxializationDrive& drive, double mode_frequency,
                              ExcitationSide side = ExcitationSide::cyclotron) {
  if (drive.epsilon == 0.0) return 0.0;
  const auto exc = ExcitationDrive::at_lab_frequency(1.0, mode_frequency, fr, drive, side);
  const auto c = response_coefficients(co, fr, drive.half_detuning, exc.rotating_detuning, side);
  return drive.epsilon / std::abs(c.C_c);
}

struct PhasePoint {
  double delta = 0.0;
  double arg_A = 0.0;
  double arg_B = 0.0;
  double abs_A = 0.0;
  double abs_B = 0.0;
  bool singular = false;
};

/// Arguments are principal values in (-pi, pi]; singular points carry NaN.
inline std::vector<PhasePoint> phase_sweep(const CoolingCoefficients& co, const TrapFrequencies& fr,
                                           const AxializationDrive& drive, double F,
                                           const std::vector<double>& delta_grid,
                                           ExcitationSide side = ExcitationSide::cyclotron,
                                           double singular_floor = default_singular_floor) {
  require_monotone(delta_grid, "excitation.delta");
  std::vector<PhasePoint> out;
  out.reserve(delta_grid.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double d : delta_grid) {
    try {
      const auto r = response(co, fr, drive, {F, d, side}, singular_floor);
      out.push_back({d, std::arg(r.A), std::arg(r.B), std::abs(r.A), std::abs(r.B), false});
    } catch (const SingularResponseError&) {
      out.push_back({d, nan, nan, nan, nan, true});
    }
  }
  return out;
}

}  // namespace penning

#endif
