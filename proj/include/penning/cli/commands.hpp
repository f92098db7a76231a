#ifndef PENNING_CLI_COMMANDS_HPP
#define PENNING_CLI_COMMANDS_HPP

#include <cmath>
#include <limits>
#include <string>

#include "penning/axialization.hpp"
#include "penning/cli/config.hpp"
#include "penning/cli/table.hpp"
#include "penning/constants.hpp"
#include "penning/drive_response.hpp"
#include "penning/laser_cooling.hpp"
#include "penning/trap.hpp"

namespace penning::cli {

inline json grid_meta(const GridSpec& g) { return json{{"min", g.min}, {"max", g.max}, {"steps", g.steps}}; }

inline json trap_meta(const ResolvedTrap& t) {
  json m = json::object();
  if (t.physical) {
    m["U0_V"] = t.physical->endcap_voltage;
    m["z0_um"] = m_to_um(t.physical->axial_half_gap);
    m["r0_um"] = m_to_um(t.physical->ring_radius);
    m["B_T"] = t.physical->magnetic_field;
  }
  m["omega_z_kHz"] = rad_s_to_khz(t.fr.omega_z);
  m["omega_c_kHz"] = rad_s_to_khz(t.fr.omega_c);
  m["omega_1_kHz"] = rad_s_to_khz(t.fr.omega_1);
  m["omega_c_prime_kHz"] = rad_s_to_khz(t.fr.omega_c_prime);
  m["omega_m_kHz"] = rad_s_to_khz(t.fr.omega_m);
  return m;
}

inline json ion_meta(const ResolvedTrap& t) {
  return json{{"mass_number", t.ion.mass_number}, {"charge_state", t.ion.charge_state}, {"mass_kg", t.mass()}};
}

inline const char* to_string(LaserForm f) {
  switch (f) {
    case LaserForm::physical: return "physical";
    case LaserForm::direct: return "direct";
    case LaserForm::ratio: return "ratio";
  }
  return "?";
}

inline json laser_meta(const LaserSection& s, const CoolingCoefficients& co, const TrapFrequencies& fr) {
  json m = json::object();
  m["form"] = to_string(s.form);
  if (s.form == LaserForm::physical) {
    m["detuning_kHz"] = s.detuning_kHz;
    m["offset_um"] = s.offset_um;
    m["waist_um"] = s.waist_um;
    m["saturation"] = s.saturation;
    m["linewidth_kHz"] = s.linewidth_kHz;
    m["wavelength_nm"] = s.wavelength_nm;
    m["direction"] = s.direction;
  } else if (s.form == LaserForm::ratio) {
    m["M_squared_kHz2"] = s.M_squared_kHz2;
    m["beta_sign"] = s.beta_sign;
  }
  m["alpha_per_s2"] = co.alpha;
  m["beta_per_s"] = co.beta;
  m["alpha_over_beta_kHz"] = co.beta != 0.0 ? rad_s_to_khz(co.alpha / co.beta) : std::nan("");
  m["M_kHz"] = rad_s_to_khz(co.M);
  const auto r = cooling_rates(co, fr);
  m["gamma_cyc_per_s"] = r.cyclotron;
  m["gamma_mag_per_s"] = r.magnetron;
  return m;
}

inline const char* to_string(EpsilonForm f) {
  switch (f) {
    case EpsilonForm::epsilon_over_omega1: return "epsilon_over_omega1_kHz";
    case EpsilonForm::voltage: return "V0_V";
    case EpsilonForm::coupling_ratio: return "coupling_ratio";
  }
  return "?";
}

inline std::string regime_name(const CoolingCoefficients& co, const TrapFrequencies& fr, const AxializationDrive& d) {
  try {
    return to_string(classify_regime(co, fr, d));
  } catch (const IndeterminateRegimeError&) {
    return "indeterminate";
  }
}

inline json axialization_meta(const AxializationSection& s, const AxializationDrive& d, const CoolingCoefficients& co,
                              const TrapFrequencies& fr) {
  json m = json::object();
  m["form"] = to_string(s.form);
  m["value"] = s.value;
  m["epsilon_per_s2"] = d.epsilon;
  m["epsilon_over_omega1_kHz"] = rad_s_to_khz(d.epsilon / fr.omega_1);
  const double e = d.epsilon / fr.omega_1;
  m["coupling_ratio"] = co.M != 0.0 ? e * e / (co.M * co.M) : std::numeric_limits<double>::infinity();
  m["regime"] = regime_name(co, fr, d);
  m["gap_kHz"] = rad_s_to_khz(avoided_crossing_gap(co, fr, d.at_detuning(0.0)));
  m["delta_kHz"] = grid_meta(s.delta_kHz);
  return m;
}

inline json base_meta(const std::string& command, const std::string& preset) {
  return json{{"tool", "penning-axial"}, {"version", version}, {"command", command}, {"preset", preset}};
}

inline json warnings_json(const std::vector<std::string>& w) {
  json a = json::array();
  for (const auto& s : w) a.push_back(s);
  return a;
}

inline SweepTable cmd_freqs(const RunConfig& rc, const std::string& preset = {}) {
  const auto trap = resolve_trap(rc);
  SweepTable t;
  t.columns = {"name", "kHz", "rad_per_s"};
  t.meta = base_meta("freqs", preset);
  t.meta["trap"] = trap_meta(trap);
  t.meta["ion"] = ion_meta(trap);
  const std::pair<const char*, double> rows[] = {{"omega_z", trap.fr.omega_z},
                                                 {"omega_c", trap.fr.omega_c},
                                                 {"omega_1", trap.fr.omega_1},
                                                 {"omega_c_prime", trap.fr.omega_c_prime},
                                                 {"omega_m", trap.fr.omega_m}};
  for (const auto& [n, w] : rows) t.add_row({std::string(n), rad_s_to_khz(w), w});
  return t;
}

inline SweepTable cmd_cooling_map(const RunConfig& rc, const std::string& preset = {}) {
  const auto trap = resolve_trap(rc);
  if (!rc.laser || rc.laser->form != LaserForm::physical) {
    throw ConfigError("cooling-map needs physical beam parameters", "laser");
  }
  if (!rc.cooling_map) throw ConfigError("missing section", "cooling_map");
  const auto tmpl = laser_template(*rc.laser);
  std::vector<double> offsets = rc.cooling_map->offset_um.values();
  for (auto& y : offsets) y = um_to_m(y);
  const auto dets = khz_grid(rc.cooling_map->detuning_kHz);
  const auto cells = cooling_map(trap.mass(), trap.fr, tmpl, offsets, dets);

  SweepTable t;
  t.columns = {"y0_um", "detuning_kHz", "gamma_cyc", "gamma_mag", "alpha", "beta"};
  t.meta = base_meta("cooling-map", preset);
  t.meta["trap"] = trap_meta(trap);
  t.meta["ion"] = ion_meta(trap);
  json lm = json::object();
  lm["waist_um"] = rc.laser->waist_um;
  lm["saturation"] = rc.laser->saturation;
  lm["linewidth_kHz"] = rc.laser->linewidth_kHz;
  lm["wavelength_nm"] = rc.laser->wavelength_nm;
  lm["direction"] = rc.laser->direction;
  t.meta["laser"] = lm;
  t.meta["cooling_map"] = json{{"offset_um", grid_meta(rc.cooling_map->offset_um)},
                               {"detuning_kHz", grid_meta(rc.cooling_map->detuning_kHz)}};
  std::size_t both = 0;
  for (const auto& c : cells) {
    both += c.gamma_cyc > 0 && c.gamma_mag > 0;
    t.add_row({m_to_um(c.beam_offset), rad_s_to_khz(c.detuning), c.gamma_cyc, c.gamma_mag, c.alpha, c.beta});
  }
  t.meta["cells_both_cooled"] = static_cast<int>(both);
  return t;
}

struct AxialContext {
  ResolvedTrap trap;
  CoolingCoefficients co;
  AxializationDrive drive;
};

inline AxialContext resolve_axial(const RunConfig& rc) {
  AxialContext c;
  c.trap = resolve_trap(rc);
  c.co = resolve_cooling(rc, c.trap);
  c.drive = resolve_drive(rc, c.trap, c.co);
  return c;
}

inline json axial_meta(const RunConfig& rc, const AxialContext& c, const std::string& command,
                       const std::string& preset) {
  json m = base_meta(command, preset);
  m["trap"] = trap_meta(c.trap);
  if (c.trap.physical || (rc.laser && rc.laser->form == LaserForm::physical)) m["ion"] = ion_meta(c.trap);
  m["laser"] = laser_meta(*rc.laser, c.co, c.trap.fr);
  m["axialization"] = axialization_meta(*rc.axialization, c.drive, c.co, c.trap.fr);
  return m;
}

inline std::vector<std::string> sweep_warnings(const AxialContext& c, const std::vector<double>& deltas) {
  double worst = 0.0;
  for (double D : deltas) worst = std::max(worst, std::abs(D));
  return axialization_regime_warnings(c.co, c.trap.fr, c.drive.at_detuning(worst));
}

inline SweepTable cmd_axial_sweep(const RunConfig& rc, const std::string& preset = {}) {
  const auto c = resolve_axial(rc);
  const auto deltas = khz_grid(rc.axialization->delta_kHz);
  const auto pts = axial_sweep(c.co, c.trap.fr, c.drive, deltas);
  SweepTable t;
  t.columns = {"Delta_kHz", "branch", "family", "delta0_kHz", "gamma0", "lab_freq_shift_kHz", "dominance"};
  t.meta = axial_meta(rc, c, "axial-sweep", preset);
  t.meta["warnings"] = warnings_json(sweep_warnings(c, deltas));
  for (const auto& p : pts) {
    for (const auto& m : p.modes) {
      const double base = m.mode_family == ModeFamily::cyclotron ? c.trap.fr.omega_c_prime : c.trap.fr.omega_m;
      t.add_row({rad_s_to_khz(p.half_detuning), std::string(to_string(m.branch)),
                 std::string(to_string(m.mode_family)), rad_s_to_khz(m.delta0), m.gamma0,
                 rad_s_to_khz(m.lab_frequency - base), m.dominance});
    }
  }
  return t;
}

inline const char* to_string(ExcitationSide s) { return s == ExcitationSide::cyclotron ? "cyclotron" : "magnetron"; }

inline SweepTable cmd_response(const RunConfig& rc, const std::string& preset = {}) {
  const auto c = resolve_axial(rc);
  if (!rc.excitation) throw ConfigError("missing section", "excitation");
  const auto& ex = *rc.excitation;
  const auto deltas = khz_grid(rc.axialization->delta_kHz);
  const auto drives = khz_grid(ex.delta_kHz);
  SweepTable t;
  t.columns = {"Delta_kHz", "delta_drive_kHz", "absA", "argA", "absB", "argB"};
  t.meta = axial_meta(rc, c, "response", preset);
  t.meta["excitation"] = json{{"F", ex.F}, {"side", to_string(ex.side)}, {"delta_kHz", grid_meta(ex.delta_kHz)}};
  std::size_t singular = 0;
  for (double D : deltas) {
    const auto pts = phase_sweep(c.co, c.trap.fr, c.drive.at_detuning(D), ex.F, drives, ex.side);
    for (const auto& p : pts) {
      singular += p.singular;
      t.add_row({rad_s_to_khz(D), rad_s_to_khz(p.delta), p.abs_A, p.arg_A, p.abs_B, p.arg_B});
    }
  }
  t.meta["singular_cells"] = static_cast<int>(singular);
  t.meta["warnings"] = warnings_json(sweep_warnings(c, deltas));
  return t;
}

}  // namespace penning::cli

#endif
