#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "stickyflow/scenarios.hpp"
#include "stickyflow/timestepper.hpp"

namespace stickyflow {

struct SweepSpec {
  std::string param;  // kappa or s_bar
  // Literal spellings as given; used verbatim in sub-directory names.
  std::vector<std::string> values;
};

struct RunConfig {
  std::optional<std::string> scenario_name;
  std::optional<Scenario> inline_scenario;
  // Applied in order on top of the base scenario. Keys: kappa, s_bar,
  // alpha_g2, gamma, h, d, t_end.
  std::vector<std::pair<std::string, double>> overrides;
  std::optional<std::vector<double>> output_times;
  SolverSettings solver;
  TransportScheme transport = TransportScheme::upwind;
  std::filesystem::path out_dir = "out";
  std::optional<SweepSpec> sweep;
  // Verbatim text of the config file or command line this came from.
  std::string source;
};

/// Parses a strictly numeric token ("1e-3", "0.2303"); throws ConfigError
/// mentioning `what` otherwise.
double parse_number(const std::string& token, const std::string& what);

/// Applies one override key to a scenario. Lowering t_end drops output times
/// past it.
void apply_override(Scenario& scenario, const std::string& key, double value);

/// Base scenario (named or inline) with overrides and output times applied,
/// then validated.
Scenario resolve_scenario(const RunConfig& config);

/// Parses a JSON config document. Errors carry "<origin>:<line>: ".
RunConfig parse_config(const std::string& text, const std::string& origin = "config");
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved, self-contained echo of one run. Feeding it back through
/// parse_config reproduces the run exactly.
nlohmann::json echo_config(const Scenario& scenario, const SolverSettings& solver, TransportScheme transport,
                           const std::string& source);

std::string to_string(TransportScheme scheme);
TransportScheme transport_from_string(const std::string& name);

}  // namespace stickyflow
