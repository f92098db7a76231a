#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

const std::string cli = PENNING_CLI;
const std::string golden = std::string(PENNING_SOURCE_DIR) + "/tests/golden/";

std::string tmp(const std::string& name) { return ::testing::TempDir() + "penning_cli_" + name; }

int run(const std::string& args) {
  const std::string cmd = "\"" + cli + "\" " + args + " 2>/dev/null";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string write_config(const std::string& name, const std::string& body) {
  const auto p = tmp(name);
  std::ofstream(p) << body;
  return p;
}

struct GoldenCase {
  const char* file;
  const char* args;
};

}  // namespace

class GoldenOutputs : public ::testing::TestWithParam<GoldenCase> {};

TEST_P(GoldenOutputs, ByteIdentical) {
  const auto& c = GetParam();
  const auto out = tmp(c.file);
  ASSERT_EQ(run(std::string(c.args) + " --out " + out), 0);
  const auto want = slurp(golden + c.file);
  ASSERT_FALSE(want.empty()) << "missing golden " << c.file;
  EXPECT_TRUE(slurp(out) == want) << c.file << " differs from golden";
}

INSTANTIATE_TEST_SUITE_P(
    Presets, GoldenOutputs,
    ::testing::Values(GoldenCase{"fig4.csv", "cooling-map --preset fig4"},
                      GoldenCase{"fig5a.csv", "axial-sweep --preset fig5a"},
                      GoldenCase{"fig5b.csv", "axial-sweep --preset fig5b"},
                      GoldenCase{"fig5c.csv", "axial-sweep --preset fig5c"},
                      GoldenCase{"fig5d.csv", "axial-sweep --preset fig5d"},
                      GoldenCase{"fig6.csv", "axial-sweep --preset fig6"},
                      GoldenCase{"fig7-weak.csv", "response --preset fig7-weak"},
                      GoldenCase{"fig7-strong.csv", "response --preset fig7-strong"},
                      GoldenCase{"fig5a_freqs.csv", "freqs --preset fig5a"},
                      GoldenCase{"fig5d.json", "axial-sweep --preset fig5d --format json"}),
    [](const auto& info) {
      std::string n = info.param.file;
      for (auto& ch : n) {
        if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
      }
      return n;
    });

TEST(Cli, RepeatedRunsAreIdentical) {
  ASSERT_EQ(run("axial-sweep --preset fig6 --out " + tmp("r1.csv")), 0);
  ASSERT_EQ(run("axial-sweep --preset fig6 --out " + tmp("r2.csv")), 0);
  EXPECT_EQ(slurp(tmp("r1.csv")), slurp(tmp("r2.csv")));
}

TEST(Cli, JsonOutputHasMetaAndRows) {
  ASSERT_EQ(run("freqs --preset fig5a --format json --out " + tmp("f.json")), 0);
  const auto j = nlohmann::json::parse(slurp(tmp("f.json")));
  EXPECT_TRUE(j.contains("meta"));
  ASSERT_TRUE(j.contains("rows"));
  EXPECT_EQ(j["rows"].size(), 5u);
  EXPECT_EQ(j["meta"]["command"], "freqs");
}

TEST(Cli, ConfigFileMergesOverPreset) {
  const auto cfg = write_config("merge.json", R"({"axialization": {"delta_kHz": 0}, "output": {"format": "json"}})");
  ASSERT_EQ(run("axial-sweep --preset fig5d --config " + cfg + " --out " + tmp("m.json")), 0);
  const auto j = nlohmann::json::parse(slurp(tmp("m.json")));
  EXPECT_EQ(j["rows"].size(), 4u);
}

TEST(Cli, FormatFlagOverridesConfig) {
  const auto cfg = write_config("fmt.json", R"({"output": {"format": "json"}})");
  ASSERT_EQ(run("freqs --preset fig5a --config " + cfg + " --format csv --out " + tmp("fmt.csv")), 0);
  EXPECT_EQ(slurp(tmp("fmt.csv")).rfind("# tool", 0), 0u);
}

TEST(Cli, StandaloneConfigWithoutPreset) {
  const auto cfg = write_config("alone.json", R"({"trap": {"omega_c_kHz": 380, "omega_1_kHz": 165}})");
  ASSERT_EQ(run("freqs --config " + cfg + " --out " + tmp("alone.csv")), 0);
  EXPECT_NE(slurp(tmp("alone.csv")).find("omega_m,25,"), std::string::npos);
}

TEST(Cli, ConfigErrorsExitOne) {
  EXPECT_EQ(run("freqs"), 1);
  EXPECT_EQ(run("bogus --preset fig5a"), 1);
  EXPECT_EQ(run("freqs --preset nope"), 1);
  EXPECT_EQ(run("freqs --preset fig5a --format xml"), 1);
  EXPECT_EQ(run("freqs --config /nonexistent/cfg.json"), 1);
  EXPECT_EQ(run("freqs --config " + write_config("bad.json", "{not json")), 1);
  EXPECT_EQ(run("freqs --config " + write_config("unk.json", R"({"trapp": {}})")), 1);
  EXPECT_EQ(run("freqs --config " + write_config("unst.json", R"({"trap": {"omega_c_kHz": 380, "omega_1_kHz": 200}})")),
            1);
  EXPECT_EQ(run("cooling-map --preset fig5a"), 1);
  EXPECT_EQ(run("response --preset fig5a"), 1);
}

TEST(Cli, VerificationFailureExitsTwo) {
  EXPECT_EQ(run("verify --preset fig5d --out " + tmp("v.csv")), 0);
  EXPECT_NE(slurp(tmp("v.csv")).find("# all_pass = true"), std::string::npos);
  EXPECT_EQ(run("verify --preset fig5b --out " + tmp("vb.csv")), 2);
  EXPECT_NE(slurp(tmp("vb.csv")).find("oracle_damping"), std::string::npos);
}

TEST(Cli, NumericalFailureExitsThree) {
  const auto cfg = write_config("tol.json", R"({"verify": {"tolerance": 1e-30}})");
  EXPECT_EQ(run("verify --preset fig5d --config " + cfg + " --out " + tmp("n.csv")), 3);
}

TEST(Cli, SampleConfigsRun) {
  const std::string dir = std::string(PENNING_SOURCE_DIR) + "/configs/";
  EXPECT_EQ(run("verify --config " + dir + "ca40_physical.json --out " + tmp("s1.csv")), 0);
  EXPECT_EQ(run("axial-sweep --config " + dir + "ca40_physical.json --out " + tmp("s2.csv")), 0);
  EXPECT_EQ(run("response --config " + dir + "direct_coefficients.json --out " + tmp("s3.json")), 0);
  EXPECT_EQ(run("verify --config " + dir + "direct_coefficients.json --out " + tmp("s4.json")), 0);
  EXPECT_EQ(run("cooling-map --config " + dir + "cooling_map_fine.json --out " + tmp("s5.csv")), 0);
  EXPECT_EQ(run("cooling-map --config " + dir + "direct_coefficients.json --out " + tmp("s6.csv")), 1);
}
