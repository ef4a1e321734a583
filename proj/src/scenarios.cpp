#include "stickyflow/scenarios.hpp"

#include <algorithm>
#include <cmath>

namespace stickyflow {

double PiecewiseLinearIC::operator()(double z) const {
  if (breakpoints.empty()) return 0.0;
  if (z <= breakpoints.front().first) return breakpoints.front().second;
  if (z >= breakpoints.back().first) return breakpoints.back().second;
  auto upper = std::upper_bound(breakpoints.begin(), breakpoints.end(), z,
                                [](double value, const auto& bp) { return value < bp.first; });
  const auto& [z1, s1] = *upper;
  const auto& [z0, s0] = *(upper - 1);
  const double w = (z - z0) / (z1 - z0);
  return s0 + w * (s1 - s0);
}

Vector PiecewiseLinearIC::sample(const Grid& grid) const {
  return grid.centers.unaryExpr([this](double z) { return (*this)(z); });
}

PiecewiseLinearIC ic_from_breakpoints(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw ConfigError("initial condition needs at least one breakpoint");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [z, s] = points[i];
    if (!std::isfinite(z) || !std::isfinite(s)) throw ConfigError("initial condition breakpoints must be finite");
    if (s < 0.0 || s > 1.0) throw ConfigError("initial condition saturation outside [0, 1]");
    if (i > 0 && !(z > points[i - 1].first)) throw ConfigError("initial condition z values must strictly increase");
  }
  return PiecewiseLinearIC{std::move(points)};
}

BoundaryCondition<double> BoundaryDescriptor::to_condition() const {
  switch (kind) {
    case Kind::dirichlet:
      return dirichlet(value);
    case Kind::flux:
      return flux(value);
    case Kind::robin:
      return robin(beta, s_out);
  }
  return no_flux();
}

std::string to_string(BoundaryDescriptor::Kind kind) {
  switch (kind) {
    case BoundaryDescriptor::Kind::dirichlet:
      return "dirichlet";
    case BoundaryDescriptor::Kind::flux:
      return "flux";
    case BoundaryDescriptor::Kind::robin:
      return "robin";
  }
  return "flux";
}

BoundaryDescriptor::Kind boundary_kind_from_string(const std::string& name) {
  if (name == "dirichlet") return BoundaryDescriptor::Kind::dirichlet;
  if (name == "flux") return BoundaryDescriptor::Kind::flux;
  if (name == "robin") return BoundaryDescriptor::Kind::robin;
  throw ConfigError("unknown boundary type '" + name + "' (expected dirichlet, flux or robin)");
}

void Scenario::validate() const {
  params.validate();
  if (!(d > 0.0) || d > params.depth_h) throw ConfigError("grid spacing d must lie in (0, h]");
  if (!std::isfinite(t_end) || t_end < 0.0) throw ConfigError("t_end must be finite and >= 0");
  ic_from_breakpoints(ic.breakpoints);
  for (const auto& [z, s] : ic.breakpoints) {
    if (z < -params.depth_h || z > 0.0) throw ConfigError("initial condition breakpoint outside [-h, 0]");
  }
  for (double t : output_times) {
    if (!std::isfinite(t) || t < 0.0 || t > t_end) throw ConfigError("output time outside [0, t_end]");
  }
  for (const auto* end : {&top, &bottom}) {
    if (end->kind == BoundaryDescriptor::Kind::robin) robin(end->beta, end->s_out);
    if (!std::isfinite(end->value)) throw ConfigError("boundary value must be finite");
  }
}

Grid Scenario::grid() const { return build_grid(params.depth_h, d); }

State Scenario::initial_state() const { return State{0.0, ic.sample(grid())}; }

BoundarySpec Scenario::boundary() const { return BoundarySpec{top.to_condition(), bottom.to_condition()}; }

double sandy_loam_sbar(double theta_r, double theta_s) { return theta_r / theta_s; }

namespace {

Scenario column_preset(std::string name) {
  Scenario sc;
  sc.name = std::move(name);
  sc.params.kappa = 0.005;
  sc.params.alpha_g = 0.5;
  sc.params.s_bar = sandy_loam_sbar();
  sc.params.gamma = 1.0;
  sc.params.depth_h = 5.0;
  sc.d = 0.01;
  sc.top = BoundaryDescriptor{BoundaryDescriptor::Kind::flux, 0.0};
  sc.bottom = BoundaryDescriptor{BoundaryDescriptor::Kind::flux, 0.0};
  sc.t_end = 2500.0;
  sc.output_times = {0.5, 5.0, 250.0, 2500.0};
  return sc;
}

}  // namespace

Scenario example1() {
  Scenario sc = column_preset("example1");
  sc.ic = ic_from_breakpoints({{-0.51, 0.0}, {-0.50, 1.0}});
  return sc;
}

Scenario example2() {
  Scenario sc = column_preset("example2");
  sc.ic = ic_from_breakpoints({{-4.51, 0.3}, {-4.50, 0.0}});
  return sc;
}

Scenario example3(double kappa, double s_bar) {
  Scenario sc = column_preset("example3");
  sc.params.kappa = kappa;
  sc.params.s_bar = s_bar;
  sc.ic = ic_from_breakpoints({{-2.01, 0.0}, {-2.00, 1.0}, {0.0, 0.0}});
  sc.top = BoundaryDescriptor{BoundaryDescriptor::Kind::dirichlet, 0.0};
  sc.bottom = BoundaryDescriptor{BoundaryDescriptor::Kind::dirichlet, 0.0};
  sc.t_end = 5.0;
  sc.output_times = {0.5, 5.0};
  if (kappa < 0.0 || kappa > 0.01) throw ConfigError("example3 kappa must lie in [0, 0.01]");
  sc.params.validate();
  return sc;
}

Scenario scenario_by_name(const std::string& name) {
  if (name == "example1") return example1();
  if (name == "example2") return example2();
  if (name == "example3") return example3(0.005);
  throw ConfigError("unknown scenario '" + name + "' (expected example1, example2 or example3)");
}

}  // namespace stickyflow
