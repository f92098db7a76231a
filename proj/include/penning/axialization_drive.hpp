#ifndef PENNING_AXIALIZATION_DRIVE_HPP
#define PENNING_AXIALIZATION_DRIVE_HPP

#include <cmath>
#include <optional>

#include "penning/errors.hpp"
#include "penning/trap.hpp"

namespace penning {

/// Quadrupole drive V0 (x^2 - y^2)/(2 r0^2) cos(omega_a t) with omega_a = omega_c + 2 Delta.
struct AxializationDrive {
  double epsilon = 0.0;                 // e V0 / (2 m r0^2), s^-2, >= 0
  double half_detuning = 0.0;           // Delta, rad/s
  std::optional<double> drive_voltage;  // V0 when epsilon was derived from it

  static AxializationDrive from_epsilon(double epsilon, double half_detuning) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
      throw ConfigError("must be non-negative and finite", "axialization.epsilon");
    }
    return {epsilon, half_detuning, std::nullopt};
  }

  /// epsilon / omega_1 is the avoided-crossing splitting in the strong limit.
  static AxializationDrive from_epsilon_over_omega1(double eps_over_w1, const TrapFrequencies& fr,
                                                    double half_detuning) {
    return from_epsilon(eps_over_w1 * fr.omega_1, half_detuning);
  }

  static AxializationDrive from_voltage(double V0, const TrapConfig& cfg, double half_detuning) {
    if (!(V0 >= 0.0) || !std::isfinite(V0)) throw ConfigError("must be non-negative", "axialization.V0");
    AxializationDrive d = from_epsilon(cfg.ion_charge * V0 / (2.0 * cfg.ion_mass * cfg.ring_radius * cfg.ring_radius),
                                       half_detuning);
    d.drive_voltage = V0;
    return d;
  }

  AxializationDrive at_detuning(double delta) const {
    AxializationDrive d = *this;
    d.half_detuning = delta;
    return d;
  }

  double drive_frequency(const TrapFrequencies& fr) const { return fr.omega_c + 2.0 * half_detuning; }
  double rotating_frame_frequency(const TrapFrequencies& fr) const { return 0.5 * fr.omega_c + half_detuning; }
};

}  // namespace penning

#endif
