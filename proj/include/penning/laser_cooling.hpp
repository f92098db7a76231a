#ifndef PENNING_LASER_COOLING_HPP
#define PENNING_LASER_COOLING_HPP

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "penning/constants.hpp"
#include "penning/errors.hpp"
#include "penning/trap.hpp"

namespace penning {

/// Gaussian cooling beam travelling along +x (direction = +1) or -x (direction = -1).
/// The effective detuning is Delta_L - direction * k * xdot, so with the default
/// -x beam a red-detuned laser offset to y0 > 0 gives alpha > 0 and beta > 0.
struct LaserConfig {
  double detuning = 0.0;         // Delta_L, rad/s
  double beam_offset = 0.0;      // y0, m
  double beam_waist = 50e-6;     // w, m
  double peak_saturation = 0.1;  // s0
  double linewidth = 0.0;        // Gamma, rad/s
  double wavelength = 0.0;       // lambda, m
  int direction = -1;

  double wavenumber() const { return constants::two_pi / wavelength; }

  /// Ca+ S1/2-P1/2 cooling transition.
  static LaserConfig calcium_397(double detuning, double beam_offset, double beam_waist = 50e-6,
                                 double peak_saturation = 0.1) {
    return {detuning, beam_offset, beam_waist, peak_saturation, khz_to_rad_s(21.6e3), 397e-9, -1};
  }
};

inline void validate(const LaserConfig& l) {
  if (!(l.beam_waist > 0.0)) throw ConfigError("must be positive", "laser.waist");
  if (!(l.peak_saturation >= 0.0)) throw ConfigError("must be non-negative", "laser.saturation");
  if (!(l.linewidth > 0.0)) throw ConfigError("must be positive", "laser.linewidth");
  if (!(l.wavelength > 0.0)) throw ConfigError("must be positive", "laser.wavelength");
  if (l.direction != 1 && l.direction != -1) throw ConfigError("must be +1 or -1", "laser.direction");
  if (!std::isfinite(l.detuning) || !std::isfinite(l.beam_offset)) {
    throw ConfigError("must be finite", "laser.detuning/offset");
  }
}

/// Linearized laser force: F_alpha = -2 alpha m y, F_beta = -2 beta m xdot.
struct CoolingCoefficients {
  double alpha = 0.0;  // s^-2
  double beta = 0.0;   // s^-1
  double M = 0.0;      // rad/s

  static CoolingCoefficients make(double alpha, double beta, const TrapFrequencies& fr) {
    return {alpha, beta, (2.0 * alpha - beta * fr.omega_c) / (2.0 * fr.omega_1)};
  }

  /// Coefficients with a given alpha/beta (rad/s) and |M| (rad/s); beta carries beta_sign.
  static CoolingCoefficients from_ratio(double alpha_over_beta, double M_abs, const TrapFrequencies& fr,
                                        int beta_sign = 1) {
    const double lever = std::abs(2.0 * alpha_over_beta - fr.omega_c);
    if (!(lever > 0.0)) throw ConfigError("alpha/beta = omega_c/2 fixes M = 0", "laser.alpha_over_beta");
    if (!(M_abs >= 0.0)) throw ConfigError("must be non-negative", "laser.M_squared");
    const double beta = (beta_sign >= 0 ? 1.0 : -1.0) * M_abs * 2.0 * fr.omega_1 / lever;
    return make(alpha_over_beta * beta, beta, fr);
  }
};

inline double local_saturation(const LaserConfig& l, double y) {
  const double d = y - l.beam_offset;
  return l.peak_saturation * std::exp(-2.0 * d * d / (l.beam_waist * l.beam_waist));
}

inline double effective_detuning(const LaserConfig& l, double xdot) {
  return l.detuning - l.direction * l.wavenumber() * xdot;
}

/// Photons per second from a two-level power-broadened Lorentzian.
inline double scattering_rate(const LaserConfig& l, double y, double xdot) {
  const double s = local_saturation(l, y);
  const double q = 2.0 * effective_detuning(l, xdot) / l.linewidth;
  return 0.5 * l.linewidth * s / (1.0 + s + q * q);
}

/// Radiation-pressure acceleration along x (the beam has no y component).
inline double scattering_acceleration(const LaserConfig& l, double mass, double y, double xdot) {
  return l.direction * constants::hbar * l.wavenumber() * scattering_rate(l, y, xdot) / mass;
}

/// Closed-form slopes of the scattering force at y = 0, xdot = 0.
inline CoolingCoefficients linearize_force(const LaserConfig& l, double mass, const TrapFrequencies& fr) {
  validate(l);
  const double k = l.wavenumber();
  const double s = local_saturation(l, 0.0);
  const double q = 2.0 * l.detuning / l.linewidth;
  const double D = 1.0 + s + q * q;
  const double pref = constants::hbar * k / (2.0 * mass);

  const double dR_ds = 0.5 * l.linewidth * (1.0 + q * q) / (D * D);
  const double ds_dy = 4.0 * s * l.beam_offset / (l.beam_waist * l.beam_waist);
  const double dR_dq = -l.linewidth * s * q / (D * D);
  const double dq_dxdot = -2.0 * l.direction * k / l.linewidth;

  const double alpha = -l.direction * pref * dR_ds * ds_dy;
  const double beta = -l.direction * pref * dR_dq * dq_dxdot;
  return CoolingCoefficients::make(alpha, beta, fr);
}

inline CoolingCoefficients linearize_force(const LaserConfig& l, const TrapConfig& cfg) {
  return linearize_force(l, cfg.ion_mass, compute_frequencies(cfg));
}

struct CoolingRates {
  double cyclotron = 0.0;  // s^-1, positive = damping
  double magnetron = 0.0;
};

inline CoolingRates cooling_rates(const CoolingCoefficients& co, const TrapFrequencies& fr) {
  return {(co.beta * fr.omega_c_prime - co.alpha) / (2.0 * fr.omega_1),
          (co.alpha - co.beta * fr.omega_m) / (2.0 * fr.omega_1)};
}

/// Exact complex eigenfrequencies for motion ~ exp(i w t); Im w > 0 means damping.
struct CoolingRoots {
  std::complex<double> cyclotron;
  std::complex<double> magnetron;
};

inline CoolingRoots cooling_roots_exact(const CoolingCoefficients& co, const TrapFrequencies& fr) {
  using C = std::complex<double>;
  const C centre(0.5 * fr.omega_c, 0.5 * co.beta);
  // omega_c'^2 - ... written via omega_1^2 to keep the |beta| << omega_1 case accurate.
  const C disc(fr.omega_1 * fr.omega_1 - 0.25 * co.beta * co.beta, 0.5 * fr.omega_c * co.beta - co.alpha);
  const C root = std::sqrt(disc);
  return {centre + root, centre - root};
}

/// Ratios that must be small for the Taylor-expanded rates to hold.
inline std::vector<std::string> cooling_regime_warnings(const CoolingCoefficients& co, const TrapFrequencies& fr,
                                                        double limit = 0.1) {
  std::vector<std::string> out;
  const double rb = std::abs(co.beta) / fr.omega_1;
  const double ra = std::abs(co.alpha) / (fr.omega_1 * fr.omega_1);
  if (rb > limit) out.push_back("|beta|/omega_1 = " + std::to_string(rb));
  if (ra > limit) out.push_back("|alpha|/omega_1^2 = " + std::to_string(ra));
  return out;
}

struct CoolingMapCell {
  double beam_offset = 0.0;
  double detuning = 0.0;
  double gamma_cyc = 0.0;
  double gamma_mag = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

inline void require_monotone(const std::vector<double>& g, const char* name) {
  if (g.empty()) throw ConfigError("grid is empty", name);
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!(g[i] > g[i - 1])) throw ConfigError("grid must be strictly increasing", name);
  }
}

/// Row-major over offsets, detuning varying fastest.
inline std::vector<CoolingMapCell> cooling_map(double mass, const TrapFrequencies& fr, const LaserConfig& templ,
                                               const std::vector<double>& offsets,
                                               const std::vector<double>& detunings) {
  require_monotone(offsets, "cooling_map.offset");
  require_monotone(detunings, "cooling_map.detuning");
  std::vector<CoolingMapCell> cells;
  cells.reserve(offsets.size() * detunings.size());
  for (double y0 : offsets) {
    for (double dl : detunings) {
      LaserConfig l = templ;
      l.beam_offset = y0;
      l.detuning = dl;
      const auto co = linearize_force(l, mass, fr);
      const auto r = cooling_rates(co, fr);
      cells.push_back({y0, dl, r.cyclotron, r.magnetron, co.alpha, co.beta});
    }
  }
  return cells;
}

}  // namespace penning

#endif
