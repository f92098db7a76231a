#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "penning/cli/config.hpp"
#include "penning/cli/presets.hpp"
#include "penning/cli/run.hpp"
#include "penning/cli/table.hpp"
#include "penning/errors.hpp"

namespace {

enum Exit { ok = 0, config_error = 1, verification_failure = 2, numerical_failure = 3 };

using namespace penning;
using namespace penning::cli;

json load_document(const std::string& config_path, const std::string& preset) {
  json user;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open " + config_path, "--config");
    try {
      user = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(e.what(), "--config");
    }
  }
  return merged_document(preset, user);
}

int run(const std::string& command, const std::string& config_path, const std::string& preset,
        const std::string& out_path, const std::string& format_flag) {
  if (config_path.empty() && preset.empty()) throw ConfigError("give --config, --preset, or both", "--config");
  const json doc = load_document(config_path, preset);
  const RunConfig rc = parse_config(doc);
  const std::string format = format_flag.empty() ? rc.output.format : format_flag;
  const std::string path = out_path.empty() ? rc.output.path : out_path;
  const auto result = execute(command, doc, preset);
  const auto& table = result.table;
  const int code = result.verification_failed ? verification_failure : ok;

  if (table.meta.contains("warnings")) {
    for (const auto& w : table.meta["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
  }
  if (path.empty() || path == "-") {
    write_table(std::cout, table, format);
  } else {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path, "--out");
    write_table(out, table, format);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penning-trap laser cooling and axialization sweeps"};
  app.set_version_flag("--version", penning::cli::version);
  std::string command, config_path, preset, out_path, format;
  app.add_option("command", command, "freqs | cooling-map | axial-sweep | response | verify")
      ->required()
      ->check(CLI::IsMember({"freqs", "cooling-map", "axial-sweep", "response", "verify"}));
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--preset", preset, "named parameter set (fig4, fig5a..fig5d, fig6, fig7-weak, fig7-strong)");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : config_error;
  }

  try {
    return run(command, config_path, preset, out_path, format);
  } catch (const penning::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const penning::UnstableTrapError& e) {
    std::cerr << "config error [trap]: " << e.what() << "\n";
    return config_error;
  } catch (const penning::IndeterminateRegimeError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const penning::SingularResponseError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return numerical_failure;
  } catch (const penning::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return numerical_failure;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return numerical_failure;
  }
}
