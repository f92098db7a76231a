#ifndef PENNING_CLI_RUN_HPP
#define PENNING_CLI_RUN_HPP

#include <string>

#include "penning/cli/commands.hpp"
#include "penning/cli/config.hpp"
#include "penning/cli/table.hpp"
#include "penning/cli/verification.hpp"

namespace penning::cli {

struct CommandOutput {
  SweepTable table;
  bool verification_failed = false;
};

inline CommandOutput execute(const std::string& command, const json& doc, const std::string& preset) {
  const RunConfig rc = parse_config(doc);
  CommandOutput out;
  if (command == "freqs") {
    out.table = cmd_freqs(rc, preset);
  } else if (command == "cooling-map") {
    out.table = cmd_cooling_map(rc, preset);
  } else if (command == "axial-sweep") {
    out.table = cmd_axial_sweep(rc, preset);
  } else if (command == "response") {
    out.table = cmd_response(rc, preset);
  } else if (command == "verify") {
    const auto rep = run_verification(rc);
    out.table = report_table(rep, rc, preset);
    out.verification_failed = !rep.all_pass();
  } else {
    throw ConfigError("unknown command " + command, "command");
  }
  if (doc.contains("description")) {
    if (!doc["description"].is_string()) throw ConfigError("must be a string", "config.description");
    out.table.meta["description"] = doc["description"];
  }
  return out;
}

}  // namespace penning::cli

#endif
