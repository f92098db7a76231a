#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "penning/cli/commands.hpp"
#include "penning/cli/config.hpp"
#include "penning/cli/presets.hpp"
#include "penning/cli/table.hpp"
#include "penning/cli/verification.hpp"
#include "penning/constants.hpp"

using namespace penning;
using namespace penning::cli;

namespace {

RunConfig parse(const char* text) { return parse_config(json::parse(text)); }

std::string field_of(const char* text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

std::string csv_of(const SweepTable& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

}  // namespace

TEST(ConfigParse, RejectsUnknownKeysWithFieldPath) {
  EXPECT_EQ(field_of(R"({"bogus": 1})"), "config.bogus");
  EXPECT_EQ(field_of(R"({"trap": {"omega_c_kHz": 380, "omega_1_kHz": 165, "B": 1}})"), "trap.B");
  EXPECT_EQ(field_of(R"({"axialization": {"coupling_ratio": 1, "delta_kHz": {"min": 0, "max": 1, "step": 2}}})"),
            "axialization.delta_kHz.step");
}

TEST(ConfigParse, TrapFormsAreExclusive) {
  EXPECT_EQ(field_of(R"({"trap": {"omega_c_kHz": 380, "omega_1_kHz": 165, "B_T": 1}})"), "trap");
  EXPECT_EQ(field_of(R"({"trap": {"omega_c_kHz": 380}})"), "trap");
  EXPECT_EQ(field_of(R"({"trap": {"U0_V": 10, "z0_um": 5000, "B_T": 1}})"), "trap");
  EXPECT_EQ(field_of(R"({"trap": {}})"), "trap");
}

TEST(ConfigParse, LaserFormsAreExclusive) {
  EXPECT_EQ(field_of(R"({"laser": {"detuning_kHz": -10, "beta_per_s": 1}})"), "laser");
  EXPECT_EQ(field_of(R"({"laser": {"alpha_per_s2": 1}})"), "laser");
  EXPECT_EQ(field_of(R"({"laser": {"alpha_over_beta_kHz": 100}})"), "laser");
  EXPECT_EQ(field_of(R"({"laser": {"alpha_over_beta_kHz": 100, "M_squared_kHz2": -1}})"), "laser.M_squared_kHz2");
  EXPECT_EQ(field_of(R"({"laser": {"alpha_over_beta_kHz": 100, "M_squared_kHz2": 1, "beta_sign": 2}})"),
            "laser.beta_sign");
  EXPECT_EQ(field_of(R"({"laser": {"direction": 1.5}})"), "laser.direction");
}

TEST(ConfigParse, ExactlyOneEpsilonSource) {
  EXPECT_EQ(field_of(R"({"axialization": {}})"), "axialization");
  EXPECT_EQ(field_of(R"({"axialization": {"coupling_ratio": 1, "V0_V": 1}})"), "axialization");
  EXPECT_EQ(field_of(R"({"axialization": {"coupling_ratio": -1}})"), "axialization");
}

TEST(ConfigParse, TypeAndRangeErrors) {
  EXPECT_EQ(field_of(R"({"trap": {"omega_c_kHz": "380", "omega_1_kHz": 165}})"), "trap.omega_c_kHz");
  EXPECT_EQ(field_of(R"({"ion": {"mass_number": 0}})"), "ion.mass_number");
  EXPECT_EQ(field_of(R"({"excitation": {"F": 0, "delta_kHz": 0}})"), "excitation.F");
  EXPECT_EQ(field_of(R"({"excitation": {"side": "axial", "delta_kHz": 0}})"), "excitation.side");
  EXPECT_EQ(field_of(R"({"excitation": {"F": 1}})"), "excitation.delta_kHz");
  EXPECT_EQ(field_of(R"({"cooling_map": {"offset_um": 0}})"), "cooling_map");
  EXPECT_EQ(field_of(R"({"output": {"format": "xml"}})"), "output.format");
  EXPECT_EQ(field_of(R"({"verify": {"tolerance": 0}})"), "verify");
  EXPECT_EQ(field_of(R"({"axialization": {"coupling_ratio": 1, "delta_kHz": {"min": 1, "max": 0, "steps": 3}}})"),
            "axialization.delta_kHz");
  EXPECT_EQ(field_of(R"({"axialization": {"coupling_ratio": 1, "delta_kHz": {"min": 0, "max": 1, "steps": 0}}})"),
            "axialization.delta_kHz.steps");
}

TEST(ConfigParse, ScalarGridIsSinglePoint) {
  const auto rc = parse(R"({"axialization": {"coupling_ratio": 1, "delta_kHz": 0.25}})");
  const auto v = rc.axialization->delta_kHz.values();
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], 0.25);
}

TEST(ConfigParse, GridEndpointsExact) {
  const GridSpec g{-1.5, 1.5, 61};
  const auto v = g.values();
  EXPECT_EQ(v.front(), -1.5);
  EXPECT_EQ(v.back(), 1.5);
  EXPECT_EQ(v[30], 0.0);
}

TEST(ConfigResolve, MissingSectionsNameTheField) {
  const RunConfig rc;
  try {
    resolve_trap(rc);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "trap");
  }
  const auto rc2 = parse(R"({"trap": {"omega_c_kHz": 380, "omega_1_kHz": 165},
                             "laser": {"alpha_over_beta_kHz": 100, "M_squared_kHz2": 0.01},
                             "axialization": {"V0_V": 1}})");
  const auto t = resolve_trap(rc2);
  const auto co = resolve_cooling(rc2, t);
  try {
    resolve_drive(rc2, t, co);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "axialization.V0_V");
  }
}

TEST(ConfigResolve, UnstableTrapRaises) {
  const auto rc = parse(R"({"trap": {"U0_V": 1000, "z0_um": 100, "r0_um": 100, "B_T": 0.1}})");
  EXPECT_THROW(resolve_trap(rc), UnstableTrapError);
}

TEST(ConfigResolve, PhysicalTrapAndVoltageDrive) {
  const auto rc = parse(R"({"trap": {"U0_V": 10, "z0_um": 5000, "r0_um": 7000, "B_T": 0.98},
                            "laser": {"detuning_kHz": -10800, "offset_um": 25},
                            "axialization": {"V0_V": 0.5}})");
  const auto t = resolve_trap(rc);
  ASSERT_TRUE(t.physical);
  EXPECT_NEAR(t.fr.omega_c, 2363890.637838005, 1e-6);
  const auto co = resolve_cooling(rc, t);
  EXPECT_GT(co.alpha, 0.0);
  EXPECT_GT(co.beta, 0.0);
  const auto d = resolve_drive(rc, t, co);
  const double r0 = 7000e-6;
  EXPECT_NEAR(d.epsilon, constants::elementary_charge * 0.5 / (2.0 * t.mass() * r0 * r0), 1e-9 * d.epsilon);
}

TEST(ConfigResolve, KhzConversionAppliedOnce) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> wc(50.0, 5000.0), frac(0.05, 0.49);
  for (int i = 0; i < 500; ++i) {
    const double c = wc(rng);
    const double one = c * frac(rng);
    json doc = {{"trap", {{"omega_c_kHz", c}, {"omega_1_kHz", one}}}};
    const auto t = resolve_trap(parse_config(doc));
    EXPECT_NEAR(t.fr.omega_c, constants::two_pi * 1e3 * c, 1e-12 * t.fr.omega_c);
    const auto meta = trap_meta(t);
    EXPECT_NEAR(meta["omega_c_kHz"].get<double>(), c, 1e-12 * c);
    EXPECT_NEAR(meta["omega_1_kHz"].get<double>(), one, 1e-12 * one);
    json again = {{"trap", {{"omega_c_kHz", meta["omega_c_kHz"]}, {"omega_1_kHz", meta["omega_1_kHz"]}}}};
    const auto t2 = resolve_trap(parse_config(again));
    EXPECT_NEAR(t2.fr.omega_1, t.fr.omega_1, 1e-12 * t.fr.omega_1);
  }
}

TEST(Presets, AllParseAndRunTheirCommand) {
  for (const auto& p : presets()) {
    const auto rc = parse_config(preset_document(p.name));
    const std::string cmd = p.command;
    SweepTable t;
    if (cmd == "cooling-map") t = cmd_cooling_map(rc, p.name);
    if (cmd == "axial-sweep") t = cmd_axial_sweep(rc, p.name);
    if (cmd == "response") t = cmd_response(rc, p.name);
    EXPECT_FALSE(t.rows.empty()) << p.name;
    EXPECT_EQ(t.meta["preset"], p.name);
  }
  EXPECT_THROW(find_preset("fig9"), ConfigError);
}

TEST(Presets, RatioPresetValuesResolve) {
  const auto rc = parse_config(preset_document("fig5d"));
  const auto c = resolve_axial(rc);
  EXPECT_NEAR(c.co.beta, 1151.9173063162575, 1e-9);
  EXPECT_NEAR(c.co.alpha, 723770989.41321964, 1e-3);
  EXPECT_NEAR(c.co.M, -628.31853071795865, 1e-9);
  EXPECT_NEAR(c.drive.epsilon, 6513938904.718977, 1e-3);
  const auto c6 = resolve_axial(parse_config(preset_document("fig6")));
  EXPECT_NEAR(c6.drive.epsilon, 2059888347.8094502, 1e-3);
}

TEST(Presets, MergePatchOverridesPreset) {
  const json user = json::parse(R"({"axialization": {"coupling_ratio": 2}, "output": {"format": "json"}})");
  const auto doc = merged_document("fig5a", user);
  const auto rc = parse_config(doc);
  EXPECT_EQ(rc.axialization->value, 2.0);
  EXPECT_EQ(rc.axialization->delta_kHz.steps, 21);
  EXPECT_EQ(rc.output.format, "json");
  EXPECT_EQ(rc.laser->alpha_over_beta_kHz, 100.0);
}

TEST(Table, FloatFormatting) {
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(380.0), "380");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_double(2363890.637838005), "2363890.64");
  EXPECT_EQ(format_double(1e-5), "1e-05");
  EXPECT_EQ(format_double(-6.5139389047e9), "-6.5139389e+09");
  EXPECT_EQ(format_double(std::nan("")), "NaN");
  EXPECT_EQ(format_double(HUGE_VAL), "inf");
  EXPECT_EQ(round_significant(1.0 / 3.0), 0.333333333);
}

TEST(Table, RowWidthChecked) {
  SweepTable t;
  t.columns = {"a", "b"};
  EXPECT_THROW(t.add_row({1.0}), Error);
}

TEST(Table, CsvQuotingAndLayout) {
  SweepTable t;
  t.columns = {"name", "v"};
  t.meta = json{{"tool", "x"}, {"trap", {{"omega_c_kHz", 380.0}}}};
  t.add_row({std::string("a,b"), 0.5});
  t.add_row({std::string("say \"hi\""), std::nan("")});
  EXPECT_EQ(csv_of(t), "# tool = \"x\"\n# trap.omega_c_kHz = 380\nname,v\n\"a,b\",0.5\n\"say \"\"hi\"\"\",NaN\n");
}

TEST(Table, JsonHasMetaAndRowsWithNullForNaN) {
  SweepTable t;
  t.columns = {"x", "y"};
  t.meta = json{{"k", 1.0 / 3.0}};
  t.add_row({1.0 / 7.0, std::nan("")});
  const auto j = to_json(t);
  EXPECT_EQ(j["meta"]["k"].get<double>(), 0.333333333);
  EXPECT_EQ(j["rows"][0]["x"].get<double>(), 0.142857143);
  EXPECT_TRUE(j["rows"][0]["y"].is_null());
}

TEST(Table, CsvMetadataRoundTripsResolvedParameters) {
  for (const char* name : {"fig5a", "fig6", "fig7-strong"}) {
    const auto rc = parse_config(preset_document(name));
    const auto t = find_preset(name).command == std::string("response") ? cmd_response(rc, name)
                                                                         : cmd_axial_sweep(rc, name);
    std::istringstream is(csv_of(t));
    const auto meta = parse_csv_meta(is);
    EXPECT_EQ(meta, rounded(t.meta)) << name;
    const json doc = {{"trap", {{"omega_c_kHz", meta["trap"]["omega_c_kHz"]},
                                {"omega_1_kHz", meta["trap"]["omega_1_kHz"]}}},
                      {"laser", {{"alpha_per_s2", meta["laser"]["alpha_per_s2"]},
                                 {"beta_per_s", meta["laser"]["beta_per_s"]}}},
                      {"axialization", {{"epsilon_over_omega1_kHz", meta["axialization"]["epsilon_over_omega1_kHz"]},
                                        {"delta_kHz", meta["axialization"]["delta_kHz"]}}}};
    const auto c = resolve_axial(parse_config(doc));
    const auto orig = resolve_axial(rc);
    EXPECT_NEAR(c.co.beta, orig.co.beta, 1e-8 * orig.co.beta);
    EXPECT_NEAR(c.drive.epsilon, orig.drive.epsilon, 1e-8 * orig.drive.epsilon);
  }
}

TEST(Table, DeterministicOutput) {
  const auto rc = parse_config(preset_document("fig7-weak"));
  EXPECT_EQ(csv_of(cmd_response(rc, "fig7-weak")), csv_of(cmd_response(rc, "fig7-weak")));
}

TEST(Commands, AxialSweepEmitsFourRecordsPerDelta) {
  const auto rc = parse_config(preset_document("fig5a"));
  const auto t = cmd_axial_sweep(rc, "fig5a");
  EXPECT_EQ(t.rows.size(), 4u * 21u);
  EXPECT_EQ(t.meta["axialization"]["regime"], "weak");
  for (const auto& r : t.rows) {
    const double dom = std::get<double>(r[6]);
    EXPECT_GE(dom, 0.0);
    EXPECT_LE(dom, 1.0);
  }
}

TEST(Commands, WeakSweepDominantShiftNearZeroAndDressedThin) {
  const auto rc = parse_config(preset_document("fig5a"));
  const auto t = cmd_axial_sweep(rc, "fig5a");
  for (const auto& r : t.rows) {
    const double shift = std::get<double>(r[5]);
    const double dom = std::get<double>(r[6]);
    if (dom == 1.0) {
      EXPECT_LT(std::abs(shift), 0.05) << "dominant component stays at its bare frequency";
    } else {
      EXPECT_LT(dom, 0.5);
    }
  }
}

TEST(Commands, ResponseCountsSingularCells) {
  const auto doc = json::parse(R"({"trap": {"omega_c_kHz": 380, "omega_1_kHz": 165},
                                   "laser": {"alpha_per_s2": 0, "beta_per_s": 0},
                                   "axialization": {"epsilon_over_omega1_kHz": 0, "delta_kHz": 0},
                                   "excitation": {"delta_kHz": {"min": -1, "max": 1, "steps": 3}}})");
  const auto t = cmd_response(parse_config(doc), "");
  EXPECT_EQ(t.meta["singular_cells"], 1);
  EXPECT_TRUE(std::isnan(std::get<double>(t.rows[1][2])));
}

TEST(Commands, CoolingMapNeedsPhysicalLaser) {
  const auto rc = parse_config(preset_document("fig5a"));
  EXPECT_THROW(cmd_cooling_map(rc, ""), ConfigError);
}

TEST(Commands, MetaEmbedsResolvedParameters) {
  const auto rc = parse_config(preset_document("fig5d"));
  const auto t = cmd_axial_sweep(rc, "fig5d");
  for (const char* k : {"omega_z_kHz", "omega_c_kHz", "omega_1_kHz", "omega_c_prime_kHz", "omega_m_kHz"}) {
    EXPECT_TRUE(t.meta["trap"].contains(k)) << k;
  }
  for (const char* k : {"alpha_per_s2", "beta_per_s", "M_kHz"}) EXPECT_TRUE(t.meta["laser"].contains(k)) << k;
  EXPECT_NEAR(t.meta["axialization"]["epsilon_over_omega1_kHz"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(t.meta["axialization"]["regime"], "strong");
  EXPECT_TRUE(t.meta.contains("warnings"));
}

TEST(Verification, PassesOnStrongPreset) {
  const auto rep = run_verification(parse_config(preset_document("fig5d")));
  for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << c.name << " " << c.value << " vs " << c.threshold;
}

TEST(Verification, ResponseChecksRunWithExcitation) {
  const auto rep = run_verification(parse_config(preset_document("fig7-strong")));
  bool seen = false;
  for (const auto& c : rep.checks) seen |= c.name == "response_equations";
  EXPECT_TRUE(seen);
  EXPECT_TRUE(rep.all_pass());
}

TEST(Verification, TightenedToleranceStillConverges) {
  auto doc = preset_document("fig5d");
  doc["verify"] = json{{"tolerance", 1e-12}, {"tightened_tolerance", 1e-14}};
  const auto rep = run_verification(parse_config(doc));
  for (const auto& c : rep.checks) {
    if (c.name == "tolerance_convergence") {
      EXPECT_TRUE(c.pass) << c.value << " vs " << c.threshold;
    }
  }
}

TEST(Verification, CorruptedDampingFailsDampingSum) {
  const RootSolver corrupted = [](const CoolingCoefficients& co, const TrapFrequencies& fr,
                                  const AxializationDrive& d) {
    auto s = shift_roots(co, fr, d);
    s.gamma_plus *= 1.01;
    return s;
  };
  const auto rep = run_verification(parse_config(preset_document("fig5d")), corrupted);
  EXPECT_FALSE(rep.all_pass());
  for (const auto& c : rep.checks) {
    if (c.name == "damping_sum") {
      EXPECT_FALSE(c.pass);
    }
    if (c.name == "quartic_residual") {
      EXPECT_TRUE(c.pass);
    }
  }
}
