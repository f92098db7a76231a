#ifndef PENNING_CLI_VERIFICATION_HPP
#define PENNING_CLI_VERIFICATION_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "penning/axialization.hpp"
#include "penning/cli/commands.hpp"
#include "penning/drive_response.hpp"
#include "penning/floquet.hpp"

namespace penning::cli {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  }
};

namespace detail {

inline CheckResult below(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value, threshold, std::isfinite(value) && value < threshold, std::move(detail)};
}

}  // namespace detail

/// Runs every invariant plus the oracle comparison over the axialization grid.
inline VerificationReport run_verification(const RunConfig& rc, const RootSolver& solver = shift_roots) {
  const auto c = resolve_axial(rc);
  const auto& fr = c.trap.fr;
  const auto& co = c.co;
  const auto deltas = khz_grid(rc.axialization->delta_kHz);
  VerificationReport rep;

  double quartic = 0.0, dsum = 0.0;
  for (double D : deltas) {
    const auto d = c.drive.at_detuning(D);
    const auto s = solver(co, fr, d);
    quartic = std::max(quartic, quartic_residual(s.delta0, s.N, D, co.M));
    dsum = std::max(dsum, std::abs(s.gamma_plus + s.gamma_minus - co.beta));
  }
  rep.checks.push_back(detail::below("quartic_residual", quartic, 1e-10));
  rep.checks.push_back(detail::below("damping_sum", dsum, 1e-12 * std::abs(co.beta) + 1e-300));

  double red = 0.0;
  const auto rates = cooling_rates(co, fr);
  for (double D : deltas) {
    const auto d0 = AxializationDrive::from_epsilon(0.0, D);
    const auto m = modes_from_roots(co, fr, d0, solver(co, fr, d0));
    const auto& mc = dominant_mode(m, ModeFamily::cyclotron);
    const auto& mm = dominant_mode(m, ModeFamily::magnetron);
    red = std::max({red, std::abs(mc.lab_frequency - fr.omega_c_prime) / fr.omega_c_prime,
                    std::abs(mm.lab_frequency - fr.omega_m) / fr.omega_m,
                    std::abs(mc.gamma0 - rates.cyclotron) / std::max(std::abs(rates.cyclotron), 1e-300),
                    std::abs(mm.gamma0 - rates.magnetron) / std::max(std::abs(rates.magnetron), 1e-300)});
  }
  rep.checks.push_back(detail::below("epsilon_zero_reduction", red, 1e-12));

  const double ftol = 1e-3 * fr.omega_1;
  double ferr = 0.0, dratio = 0.0, trace = 0.0, shift = 0.0, match = 0.0, cr = 0.0;
  double worst_D = 0.0;
  const double tol = rc.verify.tolerance;
  const double tight = rc.verify.tightened_tolerance;
  for (double D : deltas) {
    const auto d = c.drive.at_detuning(D);
    const auto r = monodromy(fr, co, d, tol);
    const auto rt = monodromy(fr, co, d, tight);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto& mm = r.matched_modes[i];
      ferr = std::max(ferr, mm.frequency_error);
      const double dtol = std::max(1e-3 * std::abs(co.beta), 1e-2 * std::abs(mm.analytic_damping));
      const double q = mm.damping_error / dtol;
      if (q > dratio) {
        dratio = q;
        worst_D = D;
      }
      match = std::max({match, mm.frequency_error, mm.damping_error});
      shift = std::max({shift, std::abs(mm.floquet_frequency - rt.matched_modes[i].floquet_frequency),
                        std::abs(mm.floquet_damping - rt.matched_modes[i].floquet_damping)});
    }
    trace = std::max(trace, std::abs(r.damping_sum - 2.0 * co.beta) / std::abs(2.0 * co.beta));
    if (d.epsilon > 0.0) cr = std::max(cr, counterrotating_error(fr, co, d, tol));
  }
  rep.checks.push_back(detail::below("oracle_frequency", ferr, ftol));
  rep.checks.push_back(detail::below("oracle_damping", dratio, 1.0,
                                     "worst Delta_kHz = " + format_double(rad_s_to_khz(worst_D))));
  rep.checks.push_back(detail::below("trace_rule", trace, 1e-9));
  rep.checks.push_back(detail::below("tolerance_convergence", shift, std::max(match, 1e-9 * fr.omega_1)));
  if (c.drive.epsilon > 0.0) {
    rep.checks.push_back(detail::below("counterrotating", cr, 1e-2 * c.drive.epsilon / fr.omega_1));
  }

  if (rc.excitation) {
    const auto& ex = *rc.excitation;
    const auto drives = khz_grid(ex.delta_kHz);
    double resid = 0.0, phase = 0.0;
    for (double D : deltas) {
      const auto d = c.drive.at_detuning(D);
      for (double dl : drives) {
        ResponseSolution s;
        try {
          s = response(co, fr, d, {ex.F, dl, ex.side});
        } catch (const SingularResponseError&) {
          continue;
        }
        const double scale = std::abs(s.C_m * s.A) + d.epsilon * std::abs(s.B) + ex.F;
        resid = std::max(resid, std::abs(s.C_m * s.A + d.epsilon * std::conj(s.B) - ex.F) / scale);
        resid = std::max(resid, std::abs(d.epsilon * s.A + s.C_c * std::conj(s.B)) / scale);
        const double a = std::arg(s.A);
        const double out = ex.side == ExcitationSide::cyclotron ? std::max(a, 0.0) + std::max(-M_PI - a, 0.0)
                                                                : std::max(-a, 0.0);
        phase = std::max(phase, out);
      }
    }
    rep.checks.push_back(detail::below("response_equations", resid, 1e-12));
    rep.checks.push_back({"response_phase_bound", phase, 0.0, phase <= 1e-12, {}});
  }
  return rep;
}

inline SweepTable report_table(const VerificationReport& rep, const RunConfig& rc, const std::string& preset) {
  const auto c = resolve_axial(rc);
  SweepTable t;
  t.columns = {"check", "value", "threshold", "pass", "detail"};
  t.meta = axial_meta(rc, c, "verify", preset);
  if (rc.excitation) {
    t.meta["excitation"] = json{{"F", rc.excitation->F},
                                {"side", to_string(rc.excitation->side)},
                                {"delta_kHz", grid_meta(rc.excitation->delta_kHz)}};
  }
  t.meta["verify"] = json{{"tolerance", rc.verify.tolerance}, {"tightened_tolerance", rc.verify.tightened_tolerance}};
  t.meta["all_pass"] = rep.all_pass();
  for (const auto& ch : rep.checks) {
    t.add_row({ch.name, ch.value, ch.threshold, std::string(ch.pass ? "pass" : "fail"), ch.detail});
  }
  return t;
}

}  // namespace penning::cli

#endif
