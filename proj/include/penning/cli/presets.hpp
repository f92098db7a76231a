#ifndef PENNING_CLI_PRESETS_HPP
#define PENNING_CLI_PRESETS_HPP

#include <string>
#include <vector>

#include "penning/cli/config.hpp"
#include "penning/errors.hpp"

namespace penning::cli {

struct Preset {
  const char* name;
  const char* command;  // the command whose output the preset reproduces
  const char* body;
};

// Shared trap pair: omega_c = 2 pi 380 kHz, omega_1 = 2 pi 165 kHz.
inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = {
      {"fig4", "cooling-map", R"({
        "description": "Ca+ cooling rates over beam offset and detuning",
        "trap": {"omega_c_kHz": 380, "omega_1_kHz": 165},
        "ion": {"mass_number": 40, "charge_state": 1},
        "laser": {"waist_um": 50, "saturation": 0.1, "linewidth_kHz": 21600, "wavelength_nm": 397, "direction": -1},
        "cooling_map": {"offset_um": {"min": -150, "max": 150, "steps": 31},
                        "detuning_kHz": {"min": -50000, "max": 50000, "steps": 21}}
      })"},
      {"fig5a", "axial-sweep", R"({
        "description": "(eps/omega_1)^2 = 0.01 M^2",
        "trap": {"omega_c_kHz": 380, "omega_1_kHz": 165},
        "laser": {"alpha_over_beta_kHz": 100, "M_squared_kHz2": 0.01},
        "axialization": {"coupling_ratio": 0.01, "delta_kHz": {"min": -1, "max": 1, "steps": 21}}
      })"},
      {"fig5b", "axial-sweep", R"({
        "description": "(eps/omega_1)^2 = M^2",
        "trap": {"omega_c_kHz": 380, "omega_1_kHz": 165},
        "laser": {"alpha_over_beta_kHz": 100, "M_squared_kHz2": 0.01},
        "axialization": {"coupling_ratio": 1, "delta_kHz": {"min": -1, "max": 1, "steps": 21}}
      })"},
      {"fig5c", "axial-sweep", R"({
        "description": "(eps/omega_1)^2 = 1.05 M^2",
        "trap": {"omega_c_kHz": 380, "omega_1_kHz": 165},
        "laser": {"alpha_over_beta_kHz": 100, "M_squared_kHz2": 0.01},
        "axialization": {"coupling_ratio": 1.05, "delta_kHz": {"min": -1, "max": 1, "steps": 21}}
      })"},
      {"fig5d", "axial-sweep", R"({
        "description": "(eps/omega_1)^2 = 100 M^2",
        "trap": {"omega_c_kHz": 380, "omega_1_kHz": 165},
        "laser": {"alpha_over_beta_kHz": 100, "M_squared_kHz2": 0.01},
        "axialization": {"coupling_ratio": 100, "delta_kHz": {"min": -4, "max": 4, "steps": 21}}
      })"},
      {"fig6", "axial-sweep", R"({
        "description": "alpha/beta = 2 pi 10 kHz, (eps/omega_1)^2 = M^2 = 0.1",
        "trap": {"omega_c_kHz": 380, "omega_1_kHz": 165},
        "laser": {"alpha_over_beta_kHz": 10, "M_squared_kHz2": 0.1},
        "axialization": {"coupling_ratio": 1, "delta_kHz": {"min": -2, "max": 2, "steps": 81}}
      })"},
      {"fig7-weak", "response", R"({
        "description": "driven response, (eps/omega_1)^2 = 0.01 M^2",
        "trap": {"omega_c_kHz": 380, "omega_1_kHz": 165},
        "laser": {"alpha_over_beta_kHz": 100, "M_squared_kHz2": 0.01},
        "axialization": {"coupling_ratio": 0.01, "delta_kHz": {"min": -1.5, "max": 1.5, "steps": 31}},
        "excitation": {"F": 1, "side": "cyclotron", "delta_kHz": {"min": -1.5, "max": 1.5, "steps": 61}}
      })"},
      {"fig7-strong", "response", R"({
        "description": "driven response, (eps/omega_1)^2 = 100 M^2",
        "trap": {"omega_c_kHz": 380, "omega_1_kHz": 165},
        "laser": {"alpha_over_beta_kHz": 100, "M_squared_kHz2": 0.01},
        "axialization": {"coupling_ratio": 100, "delta_kHz": {"min": -4, "max": 4, "steps": 41}},
        "excitation": {"F": 1, "side": "cyclotron", "delta_kHz": {"min": -4, "max": 4, "steps": 81}}
      })"},
  };
  return all;
}

inline const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (name == p.name) return p;
  }
  std::string names;
  for (const auto& p : presets()) names += std::string(names.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown preset (available: " + names + ")", "--preset");
}

inline json preset_document(const std::string& name) { return json::parse(find_preset(name).body); }

/// Preset as base document with the user's config merge-patched on top.
inline json merged_document(const std::string& preset, const json& user) {
  json doc = preset.empty() ? json::object() : preset_document(preset);
  if (!user.is_null()) doc.merge_patch(user);
  return doc;
}

}  // namespace penning::cli

#endif
