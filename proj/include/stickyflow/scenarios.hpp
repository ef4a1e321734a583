#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stickyflow/boundary.hpp"
#include "stickyflow/grid.hpp"
#include "stickyflow/model.hpp"

namespace stickyflow {

/// Linear interpolation between (z, s) breakpoints, constant beyond the
/// first and last one.
struct PiecewiseLinearIC {
  std::vector<std::pair<double, double>> breakpoints;

  double operator()(double z) const;
  Vector sample(const Grid& grid) const;
};

/// Throws ConfigError unless z is strictly increasing and every s is in [0, 1].
PiecewiseLinearIC ic_from_breakpoints(std::vector<std::pair<double, double>> points);

/// Serializable description of one boundary condition with constant data.
struct BoundaryDescriptor {
  enum class Kind { dirichlet, flux, robin };
  Kind kind = Kind::flux;
  // Dirichlet saturation or Flux inflow.
  double value = 0.0;
  double beta = 1.0;
  double s_out = 0.0;

  BoundaryCondition<double> to_condition() const;
};

std::string to_string(BoundaryDescriptor::Kind kind);
BoundaryDescriptor::Kind boundary_kind_from_string(const std::string& name);

struct Scenario {
  std::string name;
  Parameters params;
  double d = 0.01;
  PiecewiseLinearIC ic;
  BoundaryDescriptor top;
  BoundaryDescriptor bottom;
  double t_end = 0.0;
  std::vector<double> output_times;

  void validate() const;
  Grid grid() const;
  State initial_state() const;
  BoundarySpec boundary() const;
};

/// theta_r / theta_s; sandy loam: 0.111 / 0.482.
double sandy_loam_sbar(double theta_r = 0.111, double theta_s = 0.482);

/// Redistribution after infiltration: saturated top 0.5 over dry soil.
Scenario example1();
/// Wetting from a moist bottom layer (s = 0.3) into dry soil above.
Scenario example2();
/// Linear wet wedge above z = -2 with a steep front, Dirichlet 0 at both ends.
Scenario example3(double kappa, double s_bar = sandy_loam_sbar());

/// example1, example2, example3 (with its default kappa = 0.005).
Scenario scenario_by_name(const std::string& name);

}  // namespace stickyflow
