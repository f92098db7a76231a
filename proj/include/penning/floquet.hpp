#ifndef PENNING_FLOQUET_HPP
#define PENNING_FLOQUET_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "penning/axialization.hpp"
#include "penning/axialization_drive.hpp"
#include "penning/constants.hpp"
#include "penning/errors.hpp"
#include "penning/laser_cooling.hpp"
#include "penning/trap.hpp"

namespace penning {

struct RadialState {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double t = 0.0;

  cdouble u() const { return {x, y}; }
};

using Trajectory = std::vector<RadialState>;

enum class QuadrupoleTerms {
  full,        // -2 eps x cos(w_a t), +2 eps y cos(w_a t)
  corotating,  // only the half that is static in the frame rotating at w_a / 2
};

/// Dipole excitation a_x = 2 F cos(omega_d t).
struct DipoleExcitation {
  double force_amplitude = 0.0;
  double frequency = 0.0;
};

/// Scattering force from the full Lorentzian instead of its linearization.
struct NonlinearLaser {
  LaserConfig laser;
  double mass = 0.0;
};

/// Exact lab-frame radial dynamics with B along -z (counter-clockwise orbits).
struct LabFrameModel {
  TrapFrequencies fr;
  CoolingCoefficients co;
  AxializationDrive drive;
  QuadrupoleTerms quadrupole = QuadrupoleTerms::full;
  std::optional<DipoleExcitation> excitation;
  std::optional<NonlinearLaser> nonlinear_laser;

  double drive_frequency() const { return drive.drive_frequency(fr); }

  /// Unit of time for the scaled integration variable tau = omega_ref t.
  double reference_frequency() const {
    const double wa = drive_frequency();
    return wa > 0.0 ? wa : fr.omega_c;
  }
};

/// (vx, vy, ax, ay) at the given state.
inline std::array<double, 4> lab_frame_rhs(const RadialState& s, const LabFrameModel& m) {
  const double half_wz2 = m.fr.omega_c_prime * m.fr.omega_m;
  double ax = -m.fr.omega_c * s.vy + half_wz2 * s.x;
  double ay = m.fr.omega_c * s.vx + half_wz2 * s.y;

  if (m.nonlinear_laser) {
    ax += scattering_acceleration(m.nonlinear_laser->laser, m.nonlinear_laser->mass, s.y, s.vx);
  } else {
    ax += -2.0 * m.co.beta * s.vx - 2.0 * m.co.alpha * s.y;
  }

  const double eps = m.drive.epsilon;
  if (eps != 0.0) {
    const double ph = m.drive_frequency() * s.t;
    const double c = std::cos(ph);
    if (m.quadrupole == QuadrupoleTerms::full) {
      ax += -2.0 * eps * s.x * c;
      ay += 2.0 * eps * s.y * c;
    } else {
      const double sn = std::sin(ph);
      ax += -eps * (s.x * c + s.y * sn);
      ay += -eps * (s.x * sn - s.y * c);
    }
  }

  if (m.excitation) {
    ax += 2.0 * m.excitation->force_amplitude * std::cos(m.excitation->frequency * s.t);
  }
  return {s.vx, s.vy, ax, ay};
}

namespace detail {

using State4 = std::array<double, 4>;

/// Right-hand side in tau = w t with state (x, y, vx / w, vy / w).
struct ScaledSystem {
  const LabFrameModel* model;
  double w;

  void operator()(const State4& q, State4& dq, double tau) const {
    const RadialState s{q[0], q[1], q[2] * w, q[3] * w, tau / w};
    const auto d = lab_frame_rhs(s, *model);
    dq[0] = q[2];
    dq[1] = q[3];
    dq[2] = d[2] / (w * w);
    dq[3] = d[3] / (w * w);
  }
};

inline bool all_finite(const State4& q) {
  return std::all_of(q.begin(), q.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace detail

/// Adaptive Dormand-Prince integration sampled at `times` (monotone, either direction).
inline Trajectory integrate(const RadialState& state0, const LabFrameModel& model, const std::vector<double>& times,
                            double tol = 1e-10, std::size_t max_steps = 50'000'000) {
  namespace ode = boost::numeric::odeint;
  if (!(tol > 0.0)) throw ConfigError("must be positive", "integrate.tol");
  if (times.empty()) return {};
  const double w = model.reference_frequency();
  detail::State4 q{state0.x, state0.y, state0.vx / w, state0.vy / w};
  double scale = std::max({std::abs(q[0]), std::abs(q[1]), std::abs(q[2]), std::abs(q[3])});
  if (model.excitation) scale = std::max(scale, std::abs(model.excitation->force_amplitude) / (w * w));
  if (scale == 0.0) scale = 1.0;

  std::vector<double> taus(times.size());
  std::transform(times.begin(), times.end(), taus.begin(), [w](double t) { return t * w; });
  const double tau0 = state0.t * w;
  const bool forward = taus.back() >= tau0;
  const double dt = forward ? 1e-3 : -1e-3;

  Trajectory out;
  out.reserve(times.size());
  auto stepper = ode::make_dense_output(tol * scale, tol, ode::runge_kutta_dopri5<detail::State4>());
  detail::ScaledSystem sys{&model, w};
  // integrate_times reports the start point; prepend it unless it was requested.
  bool skip_first = taus.front() != tau0;
  std::vector<double> all;
  if (skip_first) all.push_back(tau0);
  all.insert(all.end(), taus.begin(), taus.end());
  try {
    ode::integrate_times(
        stepper, sys, q, all.begin(), all.end(), dt,
        [&](const detail::State4& s, double tau) {
          if (skip_first) {
            skip_first = false;
            return;
          }
          if (!detail::all_finite(s)) throw NumericalError("non-finite state during integration");
          out.push_back({s[0], s[1], s[2] * w, s[3] * w, tau / w});
        },
        ode::max_step_checker(max_steps));
  } catch (const ode::step_adjustment_error& e) {
    throw NumericalError(std::string("step size underflow: ") + e.what());
  } catch (const ode::no_progress_error& e) {
    throw NumericalError(std::string("integration made no progress: ") + e.what());
  }
  return out;
}

/// Uniform sample times start, start + dt, ..., count samples.
inline std::vector<double> uniform_times(double start, double dt, std::size_t count) {
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i) t[i] = start + dt * static_cast<double>(i);
  return t;
}

struct FloquetExponent {
  cdouble multiplier;
  double frequency = 0.0;  // arg(lambda) / T, folded into [0, omega_a / 2] for Im lambda >= 0
  double damping = 0.0;    // -log|lambda| / T
};

struct MatchedMode {
  Branch branch = Branch::plus;
  double analytic_frequency = 0.0;  // cyclotron-side lab frequency
  double analytic_damping = 0.0;
  double floquet_frequency = 0.0;   // unfolded onto the analytic candidate's band
  double floquet_damping = 0.0;
  double frequency_error = 0.0;
  double damping_error = 0.0;
};

struct MonodromyResult {
  Eigen::Matrix4d matrix;
  double period = 0.0;
  std::array<FloquetExponent, 4> exponents;
  std::array<MatchedMode, 2> matched_modes;
  double max_match_error = 0.0;
  double damping_sum = 0.0;  // sum of all four dampings, equals 2 beta exactly for the flow
  double determinant = 0.0;
};

/// One-period fundamental matrix in scaled coordinates (similar to the physical one).
inline Eigen::Matrix4d monodromy_matrix(const LabFrameModel& model, double tol = 1e-12,
                                        std::size_t max_attempts = 1'000'000) {
  namespace ode = boost::numeric::odeint;
  if (!(model.drive_frequency() > 0.0)) throw ConfigError("requires omega_a > 0", "axialization.delta");
  if (model.excitation) throw ConfigError("monodromy needs the homogeneous system", "excitation");
  const double w = model.reference_frequency();
  const double tau_end = constants::two_pi;
  Eigen::Matrix4d Mx;
  detail::ScaledSystem sys{&model, w};
  for (int j = 0; j < 4; ++j) {
    detail::State4 q{0.0, 0.0, 0.0, 0.0};
    q[static_cast<std::size_t>(j)] = 1.0;
    auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_fehlberg78<detail::State4>());
    double tau = 0.0, dtau = 1e-3;
    std::size_t attempts = 0;
    while (tau < tau_end) {
      if (++attempts > max_attempts) throw NumericalError("monodromy integration exceeded step budget");
      const double h = std::min(dtau, tau_end - tau);
      double hh = h;
      if (stepper.try_step(sys, q, tau, hh) == ode::success) {
        dtau = hh;
      } else {
        dtau = hh;
        if (!(dtau > 1e-15 * tau_end)) throw NumericalError("step size underflow");
      }
    }
    if (!detail::all_finite(q)) throw NumericalError("non-finite monodromy column");
    for (int i = 0; i < 4; ++i) Mx(i, j) = q[static_cast<std::size_t>(i)];
  }
  return Mx;
}

inline std::array<FloquetExponent, 4> floquet_exponents(const Eigen::Matrix4d& Mx, double period) {
  Eigen::EigenSolver<Eigen::Matrix4d> es(Mx, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigen-decomposition failed");
  std::array<FloquetExponent, 4> out;
  for (int i = 0; i < 4; ++i) {
    const cdouble lam = es.eigenvalues()(i);
    double a = std::arg(lam);
    if (lam.imag() == 0.0) a = std::abs(a);
    out[static_cast<std::size_t>(i)] = {lam, a / period, -std::log(std::abs(lam)) / period};
  }
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.frequency > r.frequency; });
  return out;
}

namespace detail {

/// w - k omega_a with k chosen so the result lies in (-omega_a / 2, omega_a / 2].
inline double wrap_frequency(double w, double wa, double* k_out = nullptr) {
  const double k = std::round(w / wa);
  if (k_out) *k_out = k;
  return w - k * wa;
}

}  // namespace detail

/// Pairs the two Im(lambda) >= 0 exponents with the two analytic roots.
inline std::array<MatchedMode, 2> match_exponents(const std::array<FloquetExponent, 4>& ex, const ModeSet& modes,
                                                  double omega_a) {
  struct Cand {
    Branch branch;
    double freq, damp, folded, sign, k;
  };
  std::array<Cand, 2> cand{};
  std::size_t n = 0;
  for (const auto& m : modes) {
    if (m.mode_family != ModeFamily::cyclotron) continue;
    double k = 0.0;
    const double wrapped = detail::wrap_frequency(m.lab_frequency, omega_a, &k);
    cand[n++] = {m.branch, m.lab_frequency, m.gamma0, std::abs(wrapped), wrapped < 0.0 ? -1.0 : 1.0, k};
  }
  const std::array<const FloquetExponent*, 2> e{&ex[0], &ex[1]};
  auto cost = [&](std::size_t i, std::size_t j) {
    return std::abs(e[j]->frequency - cand[i].folded) + std::abs(e[j]->damping - cand[i].damp);
  };
  const double c_straight = cost(0, 0) + cost(1, 1);
  const double c_swapped = cost(0, 1) + cost(1, 0);
  const double separation = std::abs(cand[0].folded - cand[1].folded) + std::abs(cand[0].damp - cand[1].damp);
  const double exp_sep = std::abs(e[0]->frequency - e[1]->frequency) + std::abs(e[0]->damping - e[1]->damping);
  if (separation > 1e-12 * omega_a && exp_sep > 1e-12 * omega_a &&
      std::abs(c_straight - c_swapped) < 1e-3 * separation) {
    throw BranchAmbiguityError("two analytic candidates match the Floquet exponents equally well");
  }
  const bool swap = c_swapped < c_straight;
  std::array<MatchedMode, 2> out;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto* x = e[swap ? 1 - i : i];
    const double unfolded = cand[i].k * omega_a + cand[i].sign * x->frequency;
    out[i] = {cand[i].branch, cand[i].freq, cand[i].damp, unfolded, x->damping,
              std::abs(unfolded - cand[i].freq), std::abs(x->damping - cand[i].damp)};
  }
  return out;
}

inline MonodromyResult monodromy(const TrapFrequencies& fr, const CoolingCoefficients& co,
                                 const AxializationDrive& drive, double tol = 1e-12,
                                 QuadrupoleTerms quadrupole = QuadrupoleTerms::full) {
  LabFrameModel model{fr, co, drive, quadrupole, std::nullopt, std::nullopt};
  MonodromyResult r;
  const double wa = model.drive_frequency();
  r.matrix = monodromy_matrix(model, tol);
  r.period = constants::two_pi / wa;
  r.exponents = floquet_exponents(r.matrix, r.period);
  r.matched_modes = match_exponents(r.exponents, solve_modes(co, fr, drive), wa);
  r.max_match_error = std::max(r.matched_modes[0].frequency_error, r.matched_modes[1].frequency_error);
  r.damping_sum = 0.0;
  for (const auto& x : r.exponents) r.damping_sum += x.damping;
  r.determinant = r.matrix.determinant();
  return r;
}

/// Largest shift in frequency or damping caused by the counter-rotating quadrupole half.
inline double counterrotating_error(const TrapFrequencies& fr, const CoolingCoefficients& co,
                                    const AxializationDrive& drive, double tol = 1e-12) {
  const auto full = monodromy(fr, co, drive, tol, QuadrupoleTerms::full);
  const auto rot = monodromy(fr, co, drive, tol, QuadrupoleTerms::corotating);
  double err = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    err = std::max(err, std::abs(full.matched_modes[i].floquet_frequency - rot.matched_modes[i].floquet_frequency));
    err = std::max(err, std::abs(full.matched_modes[i].floquet_damping - rot.matched_modes[i].floquet_damping));
  }
  return err;
}

struct DemodulatedComponent {
  double frequency = 0.0;
  std::vector<double> t;         // window centres
  std::vector<cdouble> envelope;  // boxcar mean of u exp(-i w t)

  double amplitude(std::size_t i) const { return std::abs(envelope[i]); }
  double phase(std::size_t i) const { return std::arg(envelope[i]); }
};

struct Demodulation {
  std::vector<DemodulatedComponent> components;
  std::vector<std::string> warnings;
};

namespace detail {

inline double uniform_step(const Trajectory& tr) {
  if (tr.size() < 2) throw ConfigError("need at least two samples", "demodulate.trajectory");
  const double dt = tr[1].t - tr[0].t;
  for (std::size_t i = 2; i < tr.size(); ++i) {
    if (std::abs((tr[i].t - tr[i - 1].t) - dt) > 1e-6 * std::abs(dt)) {
      throw ConfigError("samples must be uniformly spaced", "demodulate.trajectory");
    }
  }
  return dt;
}

}  // namespace detail

/// Mixes u(t) down at each frequency and boxcar-filters over `window` seconds.
inline Demodulation demodulate(const Trajectory& tr, const TrapFrequencies& fr, const std::vector<double>& freqs,
                               double window) {
  const double dt = detail::uniform_step(tr);
  if (!(dt > 0.0) || dt >= constants::two_pi / (4.0 * fr.omega_c_prime)) {
    throw ConfigError("sample rate must exceed 4 omega_c' / 2 pi", "demodulate.trajectory");
  }
  const auto nw = static_cast<std::size_t>(std::llround(window / dt));
  if (nw < 1 || nw > tr.size()) throw ConfigError("window must fit inside the trajectory", "demodulate.window");

  Demodulation out;
  const double bandwidth = constants::two_pi / window;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    for (std::size_t j = i + 1; j < freqs.size(); ++j) {
      if (std::abs(freqs[i] - freqs[j]) < bandwidth) {
        out.warnings.push_back("mode frequencies " + std::to_string(i) + " and " + std::to_string(j) +
                               " closer than the window bandwidth");
      }
    }
  }

  for (double w : freqs) {
    DemodulatedComponent c;
    c.frequency = w;
    std::vector<cdouble> prefix(tr.size() + 1, 0.0);
    for (std::size_t k = 0; k < tr.size(); ++k) {
      prefix[k + 1] = prefix[k] + tr[k].u() * std::polar(1.0, -w * tr[k].t);
    }
    const double scale = 1.0 / static_cast<double>(nw);
    for (std::size_t k = 0; k + nw <= tr.size(); ++k) {
      c.t.push_back(0.5 * (tr[k].t + tr[k + nw - 1].t));
      c.envelope.push_back((prefix[k + nw] - prefix[k]) * scale);
    }
    out.components.push_back(std::move(c));
  }
  return out;
}

/// Mean of u exp(-i w t) over samples with t >= t_from.
inline cdouble steady_state_amplitude(const Trajectory& tr, double w, double t_from) {
  cdouble acc = 0.0;
  std::size_t n = 0;
  for (const auto& s : tr) {
    if (s.t < t_from) continue;
    acc += s.u() * std::polar(1.0, -w * s.t);
    ++n;
  }
  if (n == 0) throw ConfigError("no samples after t_from", "steady_state.t_from");
  return acc / static_cast<double>(n);
}

namespace detail {

inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace detail

/// Refines a mode frequency from the slope of the demodulated phase.
inline double estimate_frequency(const DemodulatedComponent& c) {
  if (c.envelope.size() < 2) throw ConfigError("need at least two envelope samples", "demodulate.window");
  std::vector<double> ph(c.envelope.size());
  ph[0] = std::arg(c.envelope[0]);
  for (std::size_t i = 1; i < ph.size(); ++i) {
    double d = std::arg(c.envelope[i]) - std::arg(c.envelope[i - 1]);
    d -= constants::two_pi * std::round(d / constants::two_pi);
    ph[i] = ph[i - 1] + d;
  }
  return c.frequency + detail::fit_slope(c.t, ph);
}

/// Damping rate from the slope of the log envelope (positive = decay).
inline double estimate_damping(const DemodulatedComponent& c) {
  std::vector<double> la(c.envelope.size());
  for (std::size_t i = 0; i < la.size(); ++i) {
    const double a = std::abs(c.envelope[i]);
    if (!(a > 0.0)) throw NumericalError("zero envelope in damping fit");
    la[i] = std::log(a);
  }
  return -detail::fit_slope(c.t, la);
}

}  // namespace penning

#endif
