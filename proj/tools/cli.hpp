#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace rsg::cli {

/// What a subcommand produced: output files, a human-readable summary and
/// the verdict of every invariant check it ran.
struct RunReport {
  std::vector<std::string> manifest;
  std::vector<std::string> lines;
  bool passed = true;
  double wall_seconds = 0.0;
};

struct Subcommand {
  std::string name;
  std::string description;
  std::function<RunReport(const nlohmann::json& config, const std::string& outdir)> handler;
};

/// Dispatch table; one entry per subcommand.
const std::vector<Subcommand>& subcommands();

/// Thrown for malformed or inconsistent configuration (exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Loads the config, dispatches and writes outputs + summary.txt.
/// Exit codes: 0 all invariants pass, 1 invariant failure, 2 usage/config.
int run(const std::string& name, const std::string& config_path, std::ostream& out);
int run_with_config(const std::string& name, const nlohmann::json& config, std::ostream& out);

/// Catalog listing (names, descriptions, parameter defaults).
void print_catalog(std::ostream& out);

}  // namespace rsg::cli
