#ifndef PENNING_TRAP_HPP
#define PENNING_TRAP_HPP

#include <cmath>
#include <string>

#include "penning/constants.hpp"
#include "penning/errors.hpp"

namespace penning {

/// Ion species as (mass number, charge state); mass = A * u, defects ignored.
struct IonSpecies {
  int mass_number = 40;
  int charge_state = 1;

  double mass() const { return mass_number * constants::atomic_mass_unit; }
  double charge() const { return charge_state * constants::elementary_charge; }
};

/// Ideal hyperbolic Penning trap holding a single ion.
struct TrapConfig {
  double endcap_voltage = 0.0;  // U0, V
  double axial_half_gap = 0.0;  // z0, m
  double ring_radius = 0.0;     // r0, m
  double magnetic_field = 0.0;  // B, T (field points along -z)
  double ion_mass = 0.0;        // kg
  double ion_charge = 0.0;      // C, positive

  static TrapConfig for_ion(const IonSpecies& ion, double endcap_voltage, double axial_half_gap,
                            double ring_radius, double magnetic_field) {
    return {endcap_voltage, axial_half_gap, ring_radius, magnetic_field, ion.mass(), ion.charge()};
  }
};

struct TrapFrequencies {
  double omega_z = 0.0;
  double omega_c = 0.0;
  double omega_1 = 0.0;
  double omega_c_prime = 0.0;
  double omega_m = 0.0;
};

namespace detail {
inline void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError("must be positive and finite", name);
  }
}
}  // namespace detail

/// U0 = 0 is accepted (pure cyclotron motion); everything else must be positive.
inline void validate(const TrapConfig& cfg) {
  if (!(cfg.endcap_voltage >= 0.0) || !std::isfinite(cfg.endcap_voltage)) {
    throw ConfigError("must be non-negative and finite", "trap.U0");
  }
  detail::require_positive(cfg.axial_half_gap, "trap.z0");
  detail::require_positive(cfg.ring_radius, "trap.r0");
  detail::require_positive(cfg.magnetic_field, "trap.B");
  detail::require_positive(cfg.ion_mass, "ion.mass");
  detail::require_positive(cfg.ion_charge, "ion.charge");
}

/// Fills all five fields from (omega_c, omega_1); omega_z follows from
/// omega_z^2 = 2 (omega_c^2/4 - omega_1^2).
inline TrapFrequencies frequencies_from_pair(double omega_c, double omega_1) {
  if (!(omega_c > 0.0) || !std::isfinite(omega_c)) {
    throw ConfigError("must be positive and finite", "omega_c");
  }
  if (!(omega_1 >= 0.0) || omega_1 > 0.5 * omega_c) {
    throw ConfigError("must satisfy 0 <= omega_1 <= omega_c/2", "omega_1");
  }
  TrapFrequencies f;
  f.omega_c = omega_c;
  f.omega_1 = omega_1;
  // (w_c/2 - w_1)(w_c/2 + w_1) avoids cancellation when omega_1 ~ omega_c/2.
  const double half = 0.5 * omega_c;
  f.omega_c_prime = half + omega_1;
  f.omega_m = half - omega_1;
  f.omega_z = std::sqrt(2.0 * f.omega_m * f.omega_c_prime);
  return f;
}

inline TrapFrequencies compute_frequencies(const TrapConfig& cfg) {
  validate(cfg);
  const double omega_c = cfg.ion_charge * cfg.magnetic_field / cfg.ion_mass;
  const double geometry = 2.0 * cfg.axial_half_gap * cfg.axial_half_gap + cfg.ring_radius * cfg.ring_radius;
  const double omega_z_sq = 4.0 * cfg.ion_charge * cfg.endcap_voltage / (cfg.ion_mass * geometry);
  const double discriminant = 0.25 * omega_c * omega_c - 0.5 * omega_z_sq;
  if (!(discriminant > 0.0)) {
    throw UnstableTrapError("unstable trap: omega_c^2/4 <= omega_z^2/2 (reduce U0 or raise B)");
  }
  TrapFrequencies f;
  f.omega_c = omega_c;
  f.omega_z = std::sqrt(omega_z_sq);
  f.omega_1 = std::sqrt(discriminant);
  f.omega_c_prime = 0.5 * omega_c + f.omega_1;
  // Product of roots is omega_z^2/2; this form stays accurate when omega_m << omega_c.
  f.omega_m = 0.5 * omega_z_sq / f.omega_c_prime;
  return f;
}

}  // namespace penning

#endif
