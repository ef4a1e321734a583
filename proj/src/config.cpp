#include "stickyflow/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace stickyflow {

using nlohmann::json;

namespace {

struct Anchor {
  const std::string& text;
  const std::string& origin;

  std::size_t line_of(const std::string& key) const {
    const auto pos = text.find("\"" + key + "\"");
    if (pos == std::string::npos) return 0;
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    const std::size_t line = line_of(key);
    throw ConfigError(origin + ":" + (line ? std::to_string(line) : std::string("?")) + ": " + message);
  }

  void only_keys(const json& object, const std::string& section, std::initializer_list<const char*> allowed) const {
    if (!object.is_object()) fail(section, "'" + section + "' must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : object.items()) {
      if (!ok.count(key)) fail(key, "unknown key '" + key + "' in '" + section + "'");
    }
  }

  double number(const json& object, const std::string& key) const {
    const auto& v = object.at(key);
    if (!v.is_number()) fail(key, "'" + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "'" + key + "' must be finite");
    return x;
  }

  std::vector<double> numbers(const json& object, const std::string& key) const {
    const auto& v = object.at(key);
    if (!v.is_array()) fail(key, "'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail(key, "'" + key + "' must be an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
};

BoundaryDescriptor parse_boundary(const json& j, const std::string& end, const Anchor& a) {
  a.only_keys(j, end, {"type", "value", "beta", "s_out"});
  if (!j.contains("type") || !j["type"].is_string()) a.fail(end, "boundary '" + end + "' needs a string 'type'");
  BoundaryDescriptor bd;
  try {
    bd.kind = boundary_kind_from_string(j["type"].get<std::string>());
  } catch (const ConfigError& e) {
    a.fail(end, e.what());
  }
  if (j.contains("value")) bd.value = a.number(j, "value");
  if (j.contains("beta")) bd.beta = a.number(j, "beta");
  if (j.contains("s_out")) bd.s_out = a.number(j, "s_out");
  return bd;
}

Scenario parse_inline(const json& j, const Anchor& a) {
  a.only_keys(j, "inline", {"name", "params", "d", "ic", "bc", "t_end", "output_times"});
  for (const char* required : {"params", "d", "ic", "bc", "t_end"}) {
    if (!j.contains(required)) a.fail("inline", std::string("inline scenario is missing '") + required + "'");
  }
  Scenario sc;
  sc.name = j.value("name", std::string("inline"));
  const auto& params = j["params"];
  a.only_keys(params, "params", {"kappa", "alpha_g2", "s_bar", "gamma", "h"});
  if (params.contains("kappa")) sc.params.kappa = a.number(params, "kappa");
  if (params.contains("alpha_g2")) sc.params.alpha_g = 0.5 * a.number(params, "alpha_g2");
  if (params.contains("s_bar")) sc.params.s_bar = a.number(params, "s_bar");
  if (params.contains("gamma")) sc.params.gamma = a.number(params, "gamma");
  if (params.contains("h")) sc.params.depth_h = a.number(params, "h");
  sc.d = a.number(j, "d");
  sc.t_end = a.number(j, "t_end");
  if (j.contains("output_times")) sc.output_times = a.numbers(j, "output_times");

  const auto& ic = j["ic"];
  if (!ic.is_array()) a.fail("ic", "'ic' must be an array of [z, s] pairs");
  std::vector<std::pair<double, double>> points;
  for (const auto& pt : ic) {
    if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number())
      a.fail("ic", "'ic' must be an array of [z, s] pairs");
    points.emplace_back(pt[0].get<double>(), pt[1].get<double>());
  }
  try {
    sc.ic = ic_from_breakpoints(std::move(points));
  } catch (const ConfigError& e) {
    a.fail("ic", e.what());
  }

  const auto& bc = j["bc"];
  a.only_keys(bc, "bc", {"top", "bottom"});
  if (!bc.contains("top") || !bc.contains("bottom")) a.fail("bc", "'bc' needs both 'top' and 'bottom'");
  sc.top = parse_boundary(bc["top"], "top", a);
  sc.bottom = parse_boundary(bc["bottom"], "bottom", a);
  return sc;
}

}  // namespace

double parse_number(const std::string& token, const std::string& what) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (token.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value))
    throw ConfigError(what + ": '" + token + "' is not a finite number");
  return value;
}

void apply_override(Scenario& scenario, const std::string& key, double value) {
  if (key == "kappa") {
    scenario.params.kappa = value;
  } else if (key == "s_bar") {
    scenario.params.s_bar = value;
  } else if (key == "alpha_g2") {
    scenario.params.alpha_g = 0.5 * value;
  } else if (key == "gamma") {
    scenario.params.gamma = value;
  } else if (key == "h") {
    scenario.params.depth_h = value;
  } else if (key == "d") {
    scenario.d = value;
  } else if (key == "t_end") {
    scenario.t_end = value;
    std::erase_if(scenario.output_times, [value](double t) { return t > value; });
  } else {
    throw ConfigError("unknown override key '" + key + "' (expected kappa, s_bar, alpha_g2, gamma, h, d, t_end)");
  }
}

Scenario resolve_scenario(const RunConfig& config) {
  if (config.scenario_name.has_value() == config.inline_scenario.has_value())
    throw ConfigError("exactly one of a scenario name or an inline scenario is required");
  Scenario sc = config.scenario_name ? scenario_by_name(*config.scenario_name) : *config.inline_scenario;
  for (const auto& [key, value] : config.overrides) apply_override(sc, key, value);
  if (config.output_times) {
    sc.output_times = *config.output_times;
    std::sort(sc.output_times.begin(), sc.output_times.end());
  }
  sc.validate();
  return sc;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ConfigError(origin + ":" + std::to_string(line) + ": malformed JSON: " + e.what());
  }
  const Anchor a{text, origin};
  a.only_keys(root, "config", {"scenario", "inline", "set", "output_times", "solver", "transport", "out", "sweep",
                               "source"});

  RunConfig cfg;
  cfg.source = text;
  if (root.contains("scenario")) {
    if (!root["scenario"].is_string()) a.fail("scenario", "'scenario' must be a string");
    cfg.scenario_name = root["scenario"].get<std::string>();
  }
  if (root.contains("inline")) cfg.inline_scenario = parse_inline(root["inline"], a);
  if (cfg.scenario_name.has_value() == cfg.inline_scenario.has_value())
    a.fail(cfg.scenario_name ? "inline" : "scenario", "exactly one of 'scenario' or 'inline' is required");

  if (root.contains("set")) {
    const auto& set = root["set"];
    a.only_keys(set, "set", {"kappa", "s_bar", "alpha_g2", "gamma", "h", "d", "t_end"});
    for (const auto& [key, _] : set.items()) cfg.overrides.emplace_back(key, a.number(set, key));
  }
  if (root.contains("output_times")) cfg.output_times = a.numbers(root, "output_times");
  if (root.contains("solver")) {
    const auto& s = root["solver"];
    a.only_keys(s, "solver", {"rel_tol", "abs_tol", "dt_init", "dt_min", "dt_max", "newton_tol", "newton_max_iter",
                              "safety", "max_growth"});
    auto& st = cfg.solver;
    if (s.contains("rel_tol")) st.rel_tol = a.number(s, "rel_tol");
    if (s.contains("abs_tol")) st.abs_tol = a.number(s, "abs_tol");
    if (s.contains("dt_init")) st.dt_init = a.number(s, "dt_init");
    if (s.contains("dt_min")) st.dt_min = a.number(s, "dt_min");
    if (s.contains("dt_max")) st.dt_max = a.number(s, "dt_max");
    if (s.contains("newton_tol")) st.newton_tol = a.number(s, "newton_tol");
    if (s.contains("newton_max_iter")) st.newton_max_iter = static_cast<int>(a.number(s, "newton_max_iter"));
    if (s.contains("safety")) st.safety = a.number(s, "safety");
    if (s.contains("max_growth")) st.max_growth = a.number(s, "max_growth");
    try {
      st.validate();
    } catch (const ConfigError& e) {
      a.fail("solver", e.what());
    }
  }
  if (root.contains("transport")) {
    if (!root["transport"].is_string()) a.fail("transport", "'transport' must be a string");
    try {
      cfg.transport = transport_from_string(root["transport"].get<std::string>());
    } catch (const ConfigError& e) {
      a.fail("transport", e.what());
    }
  }
  if (root.contains("out")) {
    if (!root["out"].is_string()) a.fail("out", "'out' must be a string");
    cfg.out_dir = root["out"].get<std::string>();
  }
  if (root.contains("sweep")) {
    const auto& sw = root["sweep"];
    a.only_keys(sw, "sweep", {"param", "values"});
    if (!sw.contains("param") || !sw["param"].is_string()) a.fail("sweep", "'sweep' needs a string 'param'");
    SweepSpec spec;
    spec.param = sw["param"].get<std::string>();
    if (spec.param != "kappa" && spec.param != "s_bar") a.fail("param", "sweep param must be kappa or s_bar");
    if (!sw.contains("values") || !sw["values"].is_array() || sw["values"].empty())
      a.fail("sweep", "'sweep' needs a non-empty 'values' array");
    for (const auto& v : sw["values"]) {
      std::string literal = v.is_string() ? v.get<std::string>() : v.dump();
      try {
        parse_number(literal, "sweep value");
      } catch (const ConfigError& e) {
        a.fail("values", e.what());
      }
      spec.values.push_back(std::move(literal));
    }
    cfg.sweep = std::move(spec);
  }

  // Surface scenario-level problems with a location too.
  try {
    resolve_scenario(cfg);
  } catch (const ConfigError& e) {
    a.fail(cfg.scenario_name ? "scenario" : "inline", e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ":0: cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

json echo_config(const Scenario& sc, const SolverSettings& solver, TransportScheme transport,
                 const std::string& source) {
  auto boundary = [](const BoundaryDescriptor& bd) {
    json j{{"type", to_string(bd.kind)}};
    if (bd.kind == BoundaryDescriptor::Kind::robin) {
      j["beta"] = bd.beta;
      j["s_out"] = bd.s_out;
    } else {
      j["value"] = bd.value;
    }
    return j;
  };
  json ic = json::array();
  for (const auto& [z, s] : sc.ic.breakpoints) ic.push_back({z, s});
  json out;
  out["inline"] = {
      {"name", sc.name},
      {"params",
       {{"kappa", sc.params.kappa},
        {"alpha_g2", 2.0 * sc.params.alpha_g},
        {"s_bar", sc.params.s_bar},
        {"gamma", sc.params.gamma},
        {"h", sc.params.depth_h}}},
      {"d", sc.d},
      {"ic", ic},
      {"bc", {{"top", boundary(sc.top)}, {"bottom", boundary(sc.bottom)}}},
      {"t_end", sc.t_end},
      {"output_times", sc.output_times},
  };
  out["solver"] = {{"rel_tol", solver.rel_tol},       {"abs_tol", solver.abs_tol},
                   {"dt_init", solver.dt_init},       {"dt_min", solver.dt_min},
                   {"dt_max", solver.dt_max},         {"newton_tol", solver.newton_tol},
                   {"newton_max_iter", solver.newton_max_iter}, {"safety", solver.safety},
                   {"max_growth", solver.max_growth}};
  out["transport"] = to_string(transport);
  out["source"] = source;
  return out;
}

std::string to_string(TransportScheme scheme) { return scheme == TransportScheme::upwind ? "upwind" : "central"; }

TransportScheme transport_from_string(const std::string& name) {
  if (name == "upwind") return TransportScheme::upwind;
  if (name == "central") return TransportScheme::central;
  throw ConfigError("unknown transport scheme '" + name + "' (expected upwind or central)");
}

}  // namespace stickyflow
