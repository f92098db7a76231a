#ifndef PENNING_AXIALIZATION_HPP
#define PENNING_AXIALIZATION_HPP

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "penning/axialization_drive.hpp"
#include "penning/drive_response.hpp"
#include "penning/errors.hpp"
#include "penning/laser_cooling.hpp"
#include "penning/trap.hpp"

namespace penning {

enum class Branch { plus, minus };
enum class ModeFamily { magnetron, cyclotron };
enum class Regime { weak, intermediate, strong };

inline const char* to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }
inline const char* to_string(ModeFamily f) { return f == ModeFamily::cyclotron ? "cyclotron" : "magnetron"; }
inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::weak: return "weak";
    case Regime::intermediate: return "intermediate";
    case Regime::strong: return "strong";
  }
  return "?";
}

/// One frequency component of a dressed mode.
///
/// Each root delta0 of the quartic is one physical mode with a cyclotron-side
/// component at omega_c' + Delta + delta0 and a magnetron-side component at
/// omega_m + Delta - delta0; both share gamma0. `dominance` is this component's
/// amplitude relative to the larger of the two (1 for the larger one).
struct ModeSolution {
  double delta0 = 0.0;
  double gamma0 = 0.0;
  double lab_frequency = 0.0;
  Branch branch = Branch::plus;
  ModeFamily mode_family = ModeFamily::cyclotron;
  double dominance = 1.0;

  bool dominant() const { return dominance >= 1.0; }
  bool thin() const { return dominance < 0.5; }
};

/// Real shift and damping of both roots; plus carries delta0 >= 0.
struct ShiftRoots {
  double N = 0.0;
  double delta0 = 0.0;
  double gamma_plus = 0.0;
  double gamma_minus = 0.0;
};

/// epsilon giving (epsilon / omega_1)^2 = ratio * M^2.
inline double epsilon_for_coupling_ratio(double ratio, const CoolingCoefficients& co, const TrapFrequencies& fr) {
  if (!(ratio >= 0.0)) throw ConfigError("must be non-negative", "axialization.coupling_ratio");
  return std::sqrt(ratio) * std::abs(co.M) * fr.omega_1;
}

inline double n_parameter(double epsilon, double omega_1, double half_detuning, double M) {
  const double e = epsilon / (2.0 * omega_1);
  return half_detuning * half_detuning - 0.25 * M * M + e * e;
}

/// Positive real root of d^4 - N d^2 - Delta^2 M^2 / 4 = 0 and the matching rates.
inline ShiftRoots real_shift_roots(double N, double half_detuning, double M, double beta) {
  const double p = half_detuning * M;
  const double r = std::hypot(N, p);
  double d2;
  if (N >= 0.0) {
    d2 = 0.5 * (N + r);
  } else {
    d2 = (r - N) > 0.0 ? 0.5 * p * p / (r - N) : 0.0;
  }
  ShiftRoots s;
  s.N = N;
  s.delta0 = std::sqrt(d2);
  if (s.delta0 > 0.0) {
    const double k = 0.5 * p / s.delta0;
    s.gamma_plus = 0.5 * beta + k;
    s.gamma_minus = 0.5 * beta - k;
  } else {
    // delta0 = 0 only for Delta M = 0 with N <= 0: the pair splits in damping instead.
    const double k = std::sqrt(std::max(-N, 0.0));
    s.gamma_plus = 0.5 * beta + k;
    s.gamma_minus = 0.5 * beta - k;
  }
  return s;
}

inline ShiftRoots shift_roots(const CoolingCoefficients& co, const TrapFrequencies& fr,
                              const AxializationDrive& drive) {
  if (!(fr.omega_1 > 0.0)) throw ConfigError("axialization requires omega_1 > 0", "trap.omega_1");
  const double N = n_parameter(drive.epsilon, fr.omega_1, drive.half_detuning, co.M);
  return real_shift_roots(N, drive.half_detuning, co.M, co.beta);
}

/// |delta^4 - N delta^2 - Delta^2 M^2/4| over the sum of term magnitudes.
inline double quartic_residual(double delta0, double N, double half_detuning, double M) {
  const double d2 = delta0 * delta0;
  const double c = 0.25 * half_detuning * half_detuning * M * M;
  const double scale = d2 * d2 + std::abs(N) * d2 + c;
  if (scale == 0.0) return 0.0;
  return std::abs(d2 * d2 - N * d2 - c) / scale;
}

/// |B/A| of a free mode from the null vector of the reduced 2x2 system, using
/// whichever row is better conditioned.
inline double free_mode_ratio(const CoolingCoefficients& co, const TrapFrequencies& fr,
                              const AxializationDrive& drive, double delta0, double gamma0) {
  const auto c = response_coefficients(co, fr, drive.half_detuning, cdouble(delta0, gamma0),
                                       ExcitationSide::cyclotron);
  const double am = std::abs(c.C_m);
  const double ac = std::abs(c.C_c);
  if (ac >= am) {
    if (ac == 0.0) return 1.0;
    return drive.epsilon / ac;
  }
  if (drive.epsilon == 0.0) return std::numeric_limits<double>::infinity();
  return am / drive.epsilon;
}

inline std::string mode_warnings_text(double ratio, const char* what) {
  return std::string(what) + " = " + std::to_string(ratio);
}

inline std::vector<std::string> axialization_regime_warnings(const CoolingCoefficients& co,
                                                             const TrapFrequencies& fr,
                                                             const AxializationDrive& drive, double limit = 0.1) {
  auto out = cooling_regime_warnings(co, fr, limit);
  const double re = drive.epsilon / (fr.omega_1 * fr.omega_1);
  const double rd = std::abs(drive.half_detuning) / fr.omega_1;
  if (re > limit) out.push_back(mode_warnings_text(re, "epsilon/omega_1^2"));
  if (rd > limit) out.push_back(mode_warnings_text(rd, "|Delta|/omega_1"));
  return out;
}

using ModeSet = std::array<ModeSolution, 4>;

/// Records ordered (plus, cyclotron), (plus, magnetron), (minus, cyclotron), (minus, magnetron).
inline ModeSet modes_from_roots(const CoolingCoefficients& co, const TrapFrequencies& fr,
                                const AxializationDrive& drive, const ShiftRoots& s) {
  ModeSet out;
  std::size_t n = 0;
  for (Branch b : {Branch::plus, Branch::minus}) {
    const double d = b == Branch::plus ? s.delta0 : -s.delta0;
    const double g = b == Branch::plus ? s.gamma_plus : s.gamma_minus;
    const double ratio = free_mode_ratio(co, fr, drive, d, g);
    const double amp_c = ratio <= 1.0 ? 1.0 : 1.0 / ratio;
    const double amp_m = ratio <= 1.0 ? ratio : 1.0;
    out[n++] = {d, g, fr.omega_c_prime + drive.half_detuning + d, b, ModeFamily::cyclotron, amp_c};
    out[n++] = {d, g, fr.omega_m + drive.half_detuning - d, b, ModeFamily::magnetron, amp_m};
  }
  return out;
}

inline ModeSet solve_modes(const CoolingCoefficients& co, const TrapFrequencies& fr,
                           const AxializationDrive& drive) {
  return modes_from_roots(co, fr, drive, shift_roots(co, fr, drive));
}

/// The dominant component of the mode whose larger component belongs to `family`.
inline const ModeSolution& dominant_mode(const ModeSet& modes, ModeFamily family) {
  const ModeSolution* best = nullptr;
  for (const auto& m : modes) {
    if (m.mode_family != family) continue;
    if (!best || m.dominance > best->dominance) best = &m;
  }
  return *best;
}

/// gamma0(+) + gamma0(-) - beta.
inline double damping_sum_check(const ModeSet& modes, double beta) {
  double g_plus = 0.0, g_minus = 0.0;
  for (const auto& m : modes) {
    if (m.mode_family != ModeFamily::cyclotron) continue;
    (m.branch == Branch::plus ? g_plus : g_minus) = m.gamma0;
  }
  return g_plus + g_minus - beta;
}

inline constexpr double weak_threshold = 0.1;
inline constexpr double strong_threshold = 10.0;

inline Regime classify_regime(const CoolingCoefficients& co, const TrapFrequencies& fr,
                              const AxializationDrive& drive) {
  const double e = drive.epsilon / fr.omega_1;
  const double e2 = e * e;
  const double m2 = co.M * co.M;
  if (m2 == 0.0) {
    if (e2 == 0.0) throw IndeterminateRegimeError("regime undefined for M = 0 and epsilon = 0");
    return Regime::strong;
  }
  if (e2 < weak_threshold * m2) return Regime::weak;
  if (e2 > strong_threshold * m2) return Regime::strong;
  return Regime::intermediate;
}

/// Lab-frame separation of the two cyclotron-side branch frequencies at Delta = 0.
inline double avoided_crossing_gap(const CoolingCoefficients& co, const TrapFrequencies& fr,
                                   const AxializationDrive& drive_at_resonance) {
  if (drive_at_resonance.half_detuning != 0.0) {
    throw ConfigError("gap is defined at Delta = 0", "axialization.delta");
  }
  const double N0 = n_parameter(drive_at_resonance.epsilon, fr.omega_1, 0.0, co.M);
  return 2.0 * std::sqrt(std::max(N0, 0.0));
}

struct AxialSweepPoint {
  double half_detuning = 0.0;
  ModeSet modes;
};

using RootSolver = std::function<ShiftRoots(const CoolingCoefficients&, const TrapFrequencies&,
                                            const AxializationDrive&)>;

inline std::vector<AxialSweepPoint> axial_sweep(const CoolingCoefficients& co, const TrapFrequencies& fr,
                                                const AxializationDrive& drive,
                                                const std::vector<double>& detuning_grid,
                                                const RootSolver& solver = shift_roots) {
  require_monotone(detuning_grid, "axialization.delta");
  std::vector<AxialSweepPoint> out;
  out.reserve(detuning_grid.size());
  for (double D : detuning_grid) {
    const auto d = drive.at_detuning(D);
    out.push_back({D, modes_from_roots(co, fr, d, solver(co, fr, d))});
  }
  return out;
}

}  // namespace penning

#endif
