#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stickyflow/boundary.hpp"
#include "stickyflow/grid.hpp"
#include "stickyflow/model.hpp"

namespace stickyflow {

struct SolverSettings {
  double rel_tol = 1e-5;
  double abs_tol = 1e-6;
  double dt_init = 1e-4;
  double dt_min = 1e-12;
  double dt_max = 1.0;
  double newton_tol = 1e-10;
  int newton_max_iter = 25;
  double safety = 0.9;
  // Largest factor by which the step may grow after an accepted step.
  double max_growth = 5.0;

  void validate() const;
};

struct NewtonResult {
  State state;
  int iterations = 0;
};

/// One implicit Euler step s_new - s_old - dt * rhs(s_new) = 0, solved by
/// Newton with the analytic tridiagonal Jacobian. nullopt when Newton does not
/// converge within newton_max_iter or a pivot vanishes.
std::optional<NewtonResult> newton_step(const State& state, double dt, const Grid& grid, const Parameters& p,
                                        const BoundarySpec& bc, const SolverSettings& settings);

struct StepStats {
  double dt = 0.0;
  int newton_iterations = 0;
  double error_estimate = 0.0;
  int rejected = 0;
};

struct SolverFailure {
  double time = 0.0;
  std::string reason;
};

/// Accepted states in time order. states[0] is the initial condition,
/// steps[k] describes how states[k + 1] was reached, and net_inflow[k] is
/// F_top - F_bottom evaluated at states[k].
struct Trace {
  std::vector<State> states;
  std::vector<StepStats> steps;
  std::vector<double> net_inflow;
  std::optional<SolverFailure> failure;

  bool completed() const { return !failure.has_value(); }
  std::size_t size() const { return states.size(); }
  /// Index of the state stored at exactly time t, if any.
  std::optional<std::size_t> index_at(double t) const;
};

/// Adaptive implicit Euler with step-doubling error control. Every requested
/// output time is hit exactly. On step-size underflow the returned Trace ends
/// at the last accepted state and carries a SolverFailure.
Trace integrate(const State& initial, double t_end, const std::vector<double>& output_times, const Grid& grid,
                const Parameters& p, const BoundarySpec& bc, const SolverSettings& settings = {});

}  // namespace stickyflow
