#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stickyflow/config.hpp"
#include "stickyflow/diagnostics.hpp"

namespace stickyflow {

enum ExitStatus : int { exit_success = 0, exit_config_error = 1, exit_solver_failure = 2 };

/// Outcome of one simulation, as reported in run and sweep summaries.
struct RunSummary {
  ExitStatus status = exit_success;
  double final_time = 0.0;
  double final_drift = 0.0;
  double max_undershoot = 0.0;
  int max_zigzag = 0;
  int final_zigzag = 0;
  std::optional<double> max_below_sbar;
  std::optional<double> maxmin_below_gap;
  std::optional<double> front_depth;
  std::optional<SolverFailure> failure;
};

struct RunArtifacts {
  Trace trace;
  std::vector<EventReport> events;
  RunSummary summary;
};

/// Integrates the scenario and runs the diagnostics, without touching disk.
RunArtifacts simulate(const Scenario& scenario, const SolverSettings& solver, TransportScheme transport);

/// Writes profiles.csv, mass.csv, extrema.csv, events.json and config.json
/// into dir (created if missing).
void write_artifacts(const std::filesystem::path& dir, const Scenario& scenario, const SolverSettings& solver,
                     TransportScheme transport, const RunArtifacts& artifacts, const std::string& source);

/// Shortest decimal that parses back to the same double.
std::string format_number(double x);

ExitStatus run(const RunConfig& config, std::ostream& log);
ExitStatus sweep(const RunConfig& config, std::ostream& log);

/// Command-line front door: `run ...` or `sweep ...`. args excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stickyflow
