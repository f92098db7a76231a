#ifndef PENNING_CLI_CONFIG_HPP
#define PENNING_CLI_CONFIG_HPP

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "penning/axialization.hpp"
#include "penning/drive_response.hpp"
#include "penning/errors.hpp"
#include "penning/laser_cooling.hpp"
#include "penning/trap.hpp"

namespace penning::cli {

using json = nlohmann::ordered_json;

/// Evenly spaced grid; steps = 1 yields {min}.
struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int steps = 1;

  std::vector<double> values() const {
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
      v[static_cast<std::size_t>(i)] = steps == 1 ? min : min + (max - min) * i / (steps - 1);
    }
    return v;
  }
};

enum class LaserForm { physical, direct, ratio };
enum class EpsilonForm { epsilon_over_omega1, voltage, coupling_ratio };

struct TrapSection {
  std::optional<double> omega_c_kHz, omega_1_kHz;
  std::optional<double> U0_V, z0_um, r0_um, B_T;
  bool physical() const { return U0_V.has_value(); }
};

struct LaserSection {
  LaserForm form = LaserForm::direct;
  double detuning_kHz = 0.0, offset_um = 0.0, waist_um = 50.0, saturation = 0.1;
  double linewidth_kHz = 21.6e3, wavelength_nm = 397.0;
  int direction = -1;
  double alpha_per_s2 = 0.0, beta_per_s = 0.0;
  double alpha_over_beta_kHz = 0.0, M_squared_kHz2 = 0.0;
  int beta_sign = 1;
};

struct AxializationSection {
  EpsilonForm form = EpsilonForm::epsilon_over_omega1;
  double value = 0.0;
  GridSpec delta_kHz;
};

struct ExcitationSection {
  double F = 1.0;
  ExcitationSide side = ExcitationSide::cyclotron;
  GridSpec delta_kHz;
};

struct CoolingMapSection {
  GridSpec offset_um;
  GridSpec detuning_kHz;
};

struct VerifySection {
  double tolerance = 1e-12;
  double tightened_tolerance = 1e-14;
};

struct OutputSection {
  std::string path;
  std::string format = "csv";
};

/// Validated config document; sections are optional until a command needs them.
struct RunConfig {
  std::optional<TrapSection> trap;
  IonSpecies ion;
  std::optional<LaserSection> laser;
  std::optional<AxializationSection> axialization;
  std::optional<ExcitationSection> excitation;
  std::optional<CoolingMapSection> cooling_map;
  VerifySection verify;
  OutputSection output;
};

namespace detail {

inline void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError("must be an object", path);
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!ok.count(it.key())) throw ConfigError("unknown key", path + "." + it.key());
  }
}

inline double number(const json& obj, const char* key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("must be a number", path + "." + key);
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError("must be finite", path + "." + key);
  return d;
}

inline std::optional<double> opt_number(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) return std::nullopt;
  return number(obj, key, path);
}

inline int integer(const json& obj, const char* key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError("must be an integer", path + "." + key);
  return v.get<int>();
}

inline GridSpec grid(const json& v, const std::string& path) {
  if (v.is_number()) {
    const double d = v.get<double>();
    return {d, d, 1};
  }
  reject_unknown(v, path, {"min", "max", "steps"});
  for (const char* k : {"min", "max", "steps"}) {
    if (!v.contains(k)) throw ConfigError("missing", path + "." + k);
  }
  GridSpec g{number(v, "min", path), number(v, "max", path), integer(v, "steps", path)};
  if (g.steps < 1 || g.steps > 1'000'000) throw ConfigError("must be in [1, 1e6]", path + ".steps");
  if (g.steps > 1 && !(g.max > g.min)) throw ConfigError("max must exceed min", path);
  return g;
}

inline bool any_of_keys(const json& obj, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    if (obj.contains(k)) return true;
  }
  return false;
}

}  // namespace detail

inline RunConfig parse_config(const json& doc) {
  using namespace detail;
  reject_unknown(doc, "config", {"trap", "ion", "laser", "axialization", "excitation", "cooling_map", "verify",
                                 "output", "description"});
  RunConfig rc;

  if (doc.contains("trap")) {
    const auto& t = doc["trap"];
    reject_unknown(t, "trap", {"omega_c_kHz", "omega_1_kHz", "U0_V", "z0_um", "r0_um", "B_T"});
    TrapSection s;
    s.omega_c_kHz = opt_number(t, "omega_c_kHz", "trap");
    s.omega_1_kHz = opt_number(t, "omega_1_kHz", "trap");
    s.U0_V = opt_number(t, "U0_V", "trap");
    s.z0_um = opt_number(t, "z0_um", "trap");
    s.r0_um = opt_number(t, "r0_um", "trap");
    s.B_T = opt_number(t, "B_T", "trap");
    const bool pair = s.omega_c_kHz || s.omega_1_kHz;
    const bool phys = s.U0_V || s.z0_um || s.B_T;
    if (pair == phys) {
      throw ConfigError("give exactly one of {omega_c_kHz, omega_1_kHz} or {U0_V, z0_um, r0_um, B_T}", "trap");
    }
    if (pair && !(s.omega_c_kHz && s.omega_1_kHz)) throw ConfigError("needs omega_c_kHz and omega_1_kHz", "trap");
    if (phys && !(s.U0_V && s.z0_um && s.r0_um && s.B_T)) throw ConfigError("needs U0_V, z0_um, r0_um, B_T", "trap");
    rc.trap = s;
  }

  if (doc.contains("ion")) {
    const auto& i = doc["ion"];
    reject_unknown(i, "ion", {"mass_number", "charge_state"});
    if (i.contains("mass_number")) rc.ion.mass_number = integer(i, "mass_number", "ion");
    if (i.contains("charge_state")) rc.ion.charge_state = integer(i, "charge_state", "ion");
    if (rc.ion.mass_number < 1) throw ConfigError("must be >= 1", "ion.mass_number");
    if (rc.ion.charge_state < 1) throw ConfigError("must be >= 1", "ion.charge_state");
  }

  if (doc.contains("laser")) {
    const auto& l = doc["laser"];
    reject_unknown(l, "laser", {"detuning_kHz", "offset_um", "waist_um", "saturation", "linewidth_kHz",
                                "wavelength_nm", "direction", "alpha_per_s2", "beta_per_s",
                                "alpha_over_beta_kHz", "M_squared_kHz2", "beta_sign"});
    const bool phys = any_of_keys(l, {"detuning_kHz", "offset_um", "waist_um", "saturation", "linewidth_kHz",
                                      "wavelength_nm", "direction"});
    const bool direct = any_of_keys(l, {"alpha_per_s2", "beta_per_s"});
    const bool ratio = any_of_keys(l, {"alpha_over_beta_kHz", "M_squared_kHz2", "beta_sign"});
    if (int(phys) + int(direct) + int(ratio) != 1) {
      throw ConfigError("give exactly one of physical beam parameters, direct (alpha_per_s2, beta_per_s), or "
                        "(alpha_over_beta_kHz, M_squared_kHz2)",
                        "laser");
    }
    LaserSection s;
    if (phys) {
      s.form = LaserForm::physical;
      if (auto v = opt_number(l, "detuning_kHz", "laser")) s.detuning_kHz = *v;
      if (auto v = opt_number(l, "offset_um", "laser")) s.offset_um = *v;
      if (auto v = opt_number(l, "waist_um", "laser")) s.waist_um = *v;
      if (auto v = opt_number(l, "saturation", "laser")) s.saturation = *v;
      if (auto v = opt_number(l, "linewidth_kHz", "laser")) s.linewidth_kHz = *v;
      if (auto v = opt_number(l, "wavelength_nm", "laser")) s.wavelength_nm = *v;
      if (l.contains("direction")) s.direction = integer(l, "direction", "laser");
    } else if (direct) {
      s.form = LaserForm::direct;
      if (!l.contains("alpha_per_s2") || !l.contains("beta_per_s")) {
        throw ConfigError("needs alpha_per_s2 and beta_per_s", "laser");
      }
      s.alpha_per_s2 = number(l, "alpha_per_s2", "laser");
      s.beta_per_s = number(l, "beta_per_s", "laser");
    } else {
      s.form = LaserForm::ratio;
      if (!l.contains("alpha_over_beta_kHz") || !l.contains("M_squared_kHz2")) {
        throw ConfigError("needs alpha_over_beta_kHz and M_squared_kHz2", "laser");
      }
      s.alpha_over_beta_kHz = number(l, "alpha_over_beta_kHz", "laser");
      s.M_squared_kHz2 = number(l, "M_squared_kHz2", "laser");
      if (s.M_squared_kHz2 < 0) throw ConfigError("must be non-negative", "laser.M_squared_kHz2");
      if (l.contains("beta_sign")) s.beta_sign = integer(l, "beta_sign", "laser");
      if (s.beta_sign != 1 && s.beta_sign != -1) throw ConfigError("must be +1 or -1", "laser.beta_sign");
    }
    rc.laser = s;
  }

  if (doc.contains("axialization")) {
    const auto& a = doc["axialization"];
    reject_unknown(a, "axialization", {"epsilon_over_omega1_kHz", "V0_V", "coupling_ratio", "delta_kHz"});
    AxializationSection s;
    int n = 0;
    if (a.contains("epsilon_over_omega1_kHz")) {
      s.form = EpsilonForm::epsilon_over_omega1;
      s.value = number(a, "epsilon_over_omega1_kHz", "axialization");
      ++n;
    }
    if (a.contains("V0_V")) {
      s.form = EpsilonForm::voltage;
      s.value = number(a, "V0_V", "axialization");
      ++n;
    }
    if (a.contains("coupling_ratio")) {
      s.form = EpsilonForm::coupling_ratio;
      s.value = number(a, "coupling_ratio", "axialization");
      ++n;
    }
    if (n != 1) throw ConfigError("give exactly one of epsilon_over_omega1_kHz, V0_V, coupling_ratio", "axialization");
    if (s.value < 0) throw ConfigError("drive strength must be non-negative", "axialization");
    s.delta_kHz = a.contains("delta_kHz") ? grid(a["delta_kHz"], "axialization.delta_kHz") : GridSpec{};
    rc.axialization = s;
  }

  if (doc.contains("excitation")) {
    const auto& e = doc["excitation"];
    reject_unknown(e, "excitation", {"F", "side", "delta_kHz"});
    ExcitationSection s;
    if (e.contains("F")) s.F = number(e, "F", "excitation");
    if (!(s.F > 0)) throw ConfigError("must be positive", "excitation.F");
    if (e.contains("side")) {
      const auto& v = e["side"];
      if (v == "cyclotron") {
        s.side = ExcitationSide::cyclotron;
      } else if (v == "magnetron") {
        s.side = ExcitationSide::magnetron;
      } else {
        throw ConfigError("must be \"cyclotron\" or \"magnetron\"", "excitation.side");
      }
    }
    if (!e.contains("delta_kHz")) throw ConfigError("missing", "excitation.delta_kHz");
    s.delta_kHz = grid(e["delta_kHz"], "excitation.delta_kHz");
    rc.excitation = s;
  }

  if (doc.contains("cooling_map")) {
    const auto& c = doc["cooling_map"];
    reject_unknown(c, "cooling_map", {"offset_um", "detuning_kHz"});
    if (!c.contains("offset_um") || !c.contains("detuning_kHz")) {
      throw ConfigError("needs offset_um and detuning_kHz grids", "cooling_map");
    }
    rc.cooling_map = CoolingMapSection{grid(c["offset_um"], "cooling_map.offset_um"),
                                       grid(c["detuning_kHz"], "cooling_map.detuning_kHz")};
  }

  if (doc.contains("verify")) {
    const auto& v = doc["verify"];
    reject_unknown(v, "verify", {"tolerance", "tightened_tolerance"});
    if (auto t = opt_number(v, "tolerance", "verify")) rc.verify.tolerance = *t;
    if (auto t = opt_number(v, "tightened_tolerance", "verify")) rc.verify.tightened_tolerance = *t;
    if (!(rc.verify.tolerance > 0) || !(rc.verify.tightened_tolerance > 0)) {
      throw ConfigError("tolerances must be positive", "verify");
    }
  }

  if (doc.contains("output")) {
    const auto& o = doc["output"];
    reject_unknown(o, "output", {"path", "format"});
    if (o.contains("path")) {
      if (!o["path"].is_string()) throw ConfigError("must be a string", "output.path");
      rc.output.path = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      if (!o["format"].is_string()) throw ConfigError("must be a string", "output.format");
      rc.output.format = o["format"].get<std::string>();
    }
    if (rc.output.format != "csv" && rc.output.format != "json") {
      throw ConfigError("must be \"csv\" or \"json\"", "output.format");
    }
  }
  return rc;
}

/// Physical quantities resolved from a RunConfig, all in SI / rad/s.
struct ResolvedTrap {
  TrapFrequencies fr;
  std::optional<TrapConfig> physical;
  IonSpecies ion;
  double mass() const { return physical ? physical->ion_mass : ion.mass(); }
};

inline ResolvedTrap resolve_trap(const RunConfig& rc) {
  if (!rc.trap) throw ConfigError("missing section", "trap");
  const auto& t = *rc.trap;
  ResolvedTrap r;
  r.ion = rc.ion;
  if (t.physical()) {
    r.physical = TrapConfig::for_ion(rc.ion, *t.U0_V, um_to_m(*t.z0_um), um_to_m(*t.r0_um), *t.B_T);
    r.fr = compute_frequencies(*r.physical);
  } else {
    r.fr = frequencies_from_pair(khz_to_rad_s(*t.omega_c_kHz), khz_to_rad_s(*t.omega_1_kHz));
  }
  return r;
}

inline LaserConfig laser_template(const LaserSection& s) {
  LaserConfig l;
  l.detuning = khz_to_rad_s(s.detuning_kHz);
  l.beam_offset = um_to_m(s.offset_um);
  l.beam_waist = um_to_m(s.waist_um);
  l.peak_saturation = s.saturation;
  l.linewidth = khz_to_rad_s(s.linewidth_kHz);
  l.wavelength = s.wavelength_nm * 1e-9;
  l.direction = s.direction;
  validate(l);
  return l;
}

inline CoolingCoefficients resolve_cooling(const RunConfig& rc, const ResolvedTrap& trap) {
  if (!rc.laser) throw ConfigError("missing section", "laser");
  const auto& s = *rc.laser;
  switch (s.form) {
    case LaserForm::physical: return linearize_force(laser_template(s), trap.mass(), trap.fr);
    case LaserForm::direct: return CoolingCoefficients::make(s.alpha_per_s2, s.beta_per_s, trap.fr);
    case LaserForm::ratio:
      return CoolingCoefficients::from_ratio(khz_to_rad_s(s.alpha_over_beta_kHz),
                                             khz_to_rad_s(std::sqrt(s.M_squared_kHz2)), trap.fr, s.beta_sign);
  }
  throw ConfigError("unreachable", "laser");
}

/// Drive at Delta = 0; sweeps move Delta over axialization.delta_kHz.
inline AxializationDrive resolve_drive(const RunConfig& rc, const ResolvedTrap& trap, const CoolingCoefficients& co) {
  if (!rc.axialization) throw ConfigError("missing section", "axialization");
  const auto& a = *rc.axialization;
  switch (a.form) {
    case EpsilonForm::epsilon_over_omega1:
      return AxializationDrive::from_epsilon_over_omega1(khz_to_rad_s(a.value), trap.fr, 0.0);
    case EpsilonForm::coupling_ratio:
      return AxializationDrive::from_epsilon(epsilon_for_coupling_ratio(a.value, co, trap.fr), 0.0);
    case EpsilonForm::voltage:
      if (!trap.physical) throw ConfigError("V0_V needs a physical trap (U0_V, z0_um, r0_um, B_T)", "axialization.V0_V");
      return AxializationDrive::from_voltage(a.value, *trap.physical, 0.0);
  }
  throw ConfigError("unreachable", "axialization");
}

inline std::vector<double> khz_grid(const GridSpec& g) {
  auto v = g.values();
  for (auto& x : v) x = khz_to_rad_s(x);
  return v;
}

}  // namespace penning::cli

#endif
