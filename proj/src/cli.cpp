#include "stickyflow/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace stickyflow {

using nlohmann::json;

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

RunArtifacts simulate(const Scenario& scenario, const SolverSettings& solver, TransportScheme transport) {
  Grid grid = scenario.grid();
  grid.transport = transport;
  RunArtifacts out;
  out.trace = integrate(scenario.initial_state(), scenario.t_end, scenario.output_times, grid, scenario.params,
                        scenario.boundary(), solver);
  const Trace& trace = out.trace;

  if (auto e = detect_event(trace, grid, EventKind::max_below_sbar, scenario.params.s_bar)) out.events.push_back(*e);
  for (double gap : {0.1, 0.01}) {
    if (auto e = detect_event(trace, grid, EventKind::maxmin_below_gap, gap)) out.events.push_back(*e);
  }
  for (double t : scenario.output_times) {
    if (!trace.index_at(t)) continue;
    if (auto e = detect_event(trace, grid, EventKind::front_depth, 0.05, t)) out.events.push_back(*e);
  }

  RunSummary& sum = out.summary;
  sum.status = trace.completed() ? exit_success : exit_solver_failure;
  sum.failure = trace.failure;
  sum.final_time = trace.states.back().time;
  sum.final_drift = mass_balance_audit(trace, grid).back().drift;
  for (const auto& st : trace.states) {
    const auto m = instability_metrics(st.s);
    sum.max_undershoot = std::max(sum.max_undershoot, m.undershoot);
    sum.max_zigzag = std::max(sum.max_zigzag, m.zigzag);
  }
  sum.final_zigzag = instability_metrics(trace.states.back().s).zigzag;
  for (const auto& e : out.events) {
    if (e.kind == EventKind::max_below_sbar) sum.max_below_sbar = e.time;
    if (e.kind == EventKind::maxmin_below_gap && e.threshold == 0.1) sum.maxmin_below_gap = e.time;
    if (e.kind == EventKind::front_depth) sum.front_depth = e.value;
  }
  return out;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError(path.string() + ":0: cannot write output file");
  return f;
}

}  // namespace

void write_artifacts(const std::filesystem::path& dir, const Scenario& scenario, const SolverSettings& solver,
                     TransportScheme transport, const RunArtifacts& artifacts, const std::string& source) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError(dir.string() + ":0: cannot create output directory: " + ec.message());
  const Trace& trace = artifacts.trace;
  const Grid grid = scenario.grid();

  {
    auto f = open_for_write(dir / "profiles.csv");
    f << "t,z,s\n";
    for (double t : scenario.output_times) {
      const auto idx = trace.index_at(t);
      if (!idx) continue;
      const auto& st = trace.states[*idx];
      for (Eigen::Index i = 0; i < grid.n_cells; ++i)
        f << format_number(st.time) << ',' << format_number(grid.centers[i]) << ',' << format_number(st.s[i]) << '\n';
    }
  }
  {
    auto f = open_for_write(dir / "mass.csv");
    f << "t,mass,drift\n";
    for (const auto& m : mass_balance_audit(trace, grid))
      f << format_number(m.t) << ',' << format_number(m.mass) << ',' << format_number(m.drift) << '\n';
  }
  {
    auto f = open_for_write(dir / "extrema.csv");
    f << "t,s_min,s_max\n";
    for (const auto& e : extrema_series(trace))
      f << format_number(e.t) << ',' << format_number(e.s_min) << ',' << format_number(e.s_max) << '\n';
  }
  {
    json events = json::array();
    for (const auto& e : artifacts.events)
      events.push_back({{"kind", to_string(e.kind)}, {"time", e.time}, {"value", e.value}, {"threshold", e.threshold}});
    json doc;
    doc["events"] = events;
    doc["solver"] = {{"status", trace.completed() ? "completed" : "failed"},
                     {"failure_time", trace.failure ? json(trace.failure->time) : json(nullptr)},
                     {"reason", trace.failure ? trace.failure->reason : std::string()}};
    const auto& s = artifacts.summary;
    doc["summary"] = {{"final_time", s.final_time},
                      {"final_drift", s.final_drift},
                      {"max_undershoot", s.max_undershoot},
                      {"max_zigzag", s.max_zigzag},
                      {"final_zigzag", s.final_zigzag},
                      {"steps", trace.steps.size()}};
    auto f = open_for_write(dir / "events.json");
    f << doc.dump(2) << '\n';
  }
  {
    auto f = open_for_write(dir / "config.json");
    f << echo_config(scenario, solver, transport, source).dump(2) << '\n';
  }
}

namespace {

void log_summary(std::ostream& log, const std::string& label, const RunSummary& s) {
  log << label << ": " << (s.status == exit_success ? "completed" : "FAILED") << " t=" << format_number(s.final_time)
      << " drift=" << format_number(s.final_drift);
  if (s.max_below_sbar) log << " max_below_sbar=" << format_number(*s.max_below_sbar);
  if (s.maxmin_below_gap) log << " maxmin_below_gap=" << format_number(*s.maxmin_below_gap);
  if (s.failure) log << " reason=\"" << s.failure->reason << '"';
  log << '\n';
}

}  // namespace

ExitStatus run(const RunConfig& config, std::ostream& log) {
  const Scenario scenario = resolve_scenario(config);
  const RunArtifacts artifacts = simulate(scenario, config.solver, config.transport);
  write_artifacts(config.out_dir, scenario, config.solver, config.transport, artifacts, config.source);
  log_summary(log, scenario.name, artifacts.summary);
  return artifacts.summary.status;
}

ExitStatus sweep(const RunConfig& config, std::ostream& log) {
  if (!config.sweep || config.sweep->values.empty()) throw ConfigError("sweep needs --param and --values");
  const SweepSpec& spec = *config.sweep;
  if (spec.param != "kappa" && spec.param != "s_bar") throw ConfigError("sweep param must be kappa or s_bar");

  struct Member {
    std::string literal;
    std::filesystem::path dir;
    Scenario scenario;
  };
  std::vector<Member> members;
  for (const auto& literal : spec.values) {
    RunConfig member = config;
    member.overrides.emplace_back(spec.param, parse_number(literal, "sweep value"));
    members.push_back(Member{literal, config.out_dir / (spec.param + "=" + literal), resolve_scenario(member)});
  }

  std::vector<std::future<RunSummary>> jobs;
  for (const auto& m : members) {
    jobs.push_back(std::async(std::launch::async, [&config, &m] {
      const RunArtifacts a = simulate(m.scenario, config.solver, config.transport);
      write_artifacts(m.dir, m.scenario, config.solver, config.transport, a, config.source);
      return a.summary;
    }));
  }
  std::vector<RunSummary> results;
  for (auto& j : jobs) results.push_back(j.get());

  std::filesystem::create_directories(config.out_dir);
  auto f = open_for_write(config.out_dir / "summary.csv");
  f << "value,status,exit_code,final_time,final_drift,max_undershoot,max_zigzag,final_zigzag,max_below_sbar,"
       "maxmin_below_gap,front_depth\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  bool any_success = false;
  for (std::size_t k = 0; k < members.size(); ++k) {
    const RunSummary& s = results[k];
    any_success = any_success || s.status == exit_success;
    f << members[k].literal << ',' << (s.status == exit_success ? "completed" : "failed") << ','
      << static_cast<int>(s.status) << ',' << format_number(s.final_time) << ',' << format_number(s.final_drift)
      << ',' << format_number(s.max_undershoot) << ',' << s.max_zigzag << ',' << s.final_zigzag << ','
      << opt(s.max_below_sbar) << ',' << opt(s.maxmin_below_gap) << ',' << opt(s.front_depth) << '\n';
    log_summary(log, spec.param + "=" + members[k].literal, s);
  }
  return any_success ? exit_success : exit_solver_failure;
}

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct CommonFlags {
  std::string scenario;
  std::string config;
  std::vector<std::string> sets;
  std::string output_times;
  std::string out;
  std::string rel_tol;
  std::string t_end;
  std::string transport;

  void attach(CLI::App* cmd) {
    auto* sc = cmd->add_option("--scenario", scenario, "Preset: example1, example2, example3");
    auto* cf = cmd->add_option("--config", config, "JSON run configuration");
    sc->excludes(cf);
    cmd->add_option("--set", sets, "Override key=value (kappa, s_bar, alpha_g2, gamma, h, d, t_end)");
    cmd->add_option("--output-times", output_times, "Comma-separated output times");
    cmd->add_option("--out", out, "Output directory");
    cmd->add_option("--rel-tol", rel_tol, "Relative error tolerance");
    cmd->add_option("--t-end", t_end, "Final time");
    cmd->add_option("--transport", transport, "Gravity flux discretization: upwind (default) or central");
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config.empty()) {
      cfg = load_config(config);
    } else if (!scenario.empty()) {
      cfg.scenario_name = scenario;
    } else {
      throw ConfigError("one of --scenario or --config is required");
    }
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set " + kv + ": expected key=value");
      const std::string key = kv.substr(0, eq);
      cfg.overrides.emplace_back(key, parse_number(kv.substr(eq + 1), "--set " + key));
    }
    if (!t_end.empty()) cfg.overrides.emplace_back("t_end", parse_number(t_end, "--t-end"));
    if (!output_times.empty()) {
      std::vector<double> times;
      for (const auto& tok : split_list(output_times)) times.push_back(parse_number(tok, "--output-times"));
      cfg.output_times = times;
    }
    if (!out.empty()) cfg.out_dir = out;
    if (!rel_tol.empty()) {
      cfg.solver.rel_tol = parse_number(rel_tol, "--rel-tol");
      cfg.solver.validate();
    }
    if (!transport.empty()) cfg.transport = transport_from_string(transport);
    if (cfg.source.empty()) cfg.source = command_line;
    return cfg;
  }

  std::string command_line;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Saturation transport/diffusion simulator for a 1-D soil column"};
  app.require_subcommand(1);
  CommonFlags run_flags;
  CommonFlags sweep_flags;
  std::string sweep_param;
  std::string sweep_values;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario");
  run_flags.attach(run_cmd);
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario once per parameter value");
  sweep_flags.attach(sweep_cmd);
  sweep_cmd->add_option("--param", sweep_param, "kappa or s_bar");
  sweep_cmd->add_option("--values", sweep_values, "Comma-separated values");

  std::string command_line;
  for (const auto& a : args) command_line += (command_line.empty() ? "" : " ") + a;
  run_flags.command_line = sweep_flags.command_line = command_line;

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_success;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config_error;
  }

  try {
    if (run_cmd->parsed()) return run(run_flags.resolve(), out);
    RunConfig cfg = sweep_flags.resolve();
    if (!sweep_param.empty() || !sweep_values.empty()) {
      SweepSpec spec;
      spec.param = sweep_param.empty() && cfg.sweep ? cfg.sweep->param : sweep_param;
      spec.values = sweep_values.empty() && cfg.sweep ? cfg.sweep->values : split_list(sweep_values);
      for (const auto& v : spec.values) parse_number(v, "--values");
      cfg.sweep = spec;
    }
    return sweep(cfg, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config_error;
  }
}

}  // namespace stickyflow
