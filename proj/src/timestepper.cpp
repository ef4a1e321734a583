#include "stickyflow/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stickyflow/discretization.hpp"
#include "stickyflow/tridiagonal.hpp"

namespace stickyflow {

void SolverSettings::validate() const {
  if (!(rel_tol > 0.0)) throw ConfigError("rel_tol must be > 0");
  if (!(abs_tol > 0.0)) throw ConfigError("abs_tol must be > 0");
  if (!(dt_min > 0.0 && dt_min < dt_init && dt_init <= dt_max))
    throw ConfigError("step bounds must satisfy 0 < dt_min < dt_init <= dt_max");
  if (!(newton_tol > 0.0)) throw ConfigError("newton_tol must be > 0");
  if (newton_max_iter < 1) throw ConfigError("newton_max_iter must be >= 1");
  if (!(safety > 0.0 && safety <= 1.0)) throw ConfigError("safety must lie in (0, 1]");
  if (!(max_growth > 1.0)) throw ConfigError("max_growth must be > 1");
}

std::optional<std::size_t> Trace::index_at(double t) const {
  auto it = std::lower_bound(states.begin(), states.end(), t,
                             [](const State& st, double value) { return st.time < value; });
  if (it == states.end() || it->time != t) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

std::optional<NewtonResult> newton_step(const State& state, double dt, const Grid& grid, const Parameters& p,
                                        const BoundarySpec& bc, const SolverSettings& settings) {
  State next{state.time + dt, state.s};
  for (int iter = 1; iter <= settings.newton_max_iter; ++iter) {
    const Vector residual = next.s - state.s - dt * rhs(next, grid, p, bc);
    const double scale = 1.0 + next.s.cwiseAbs().maxCoeff();
    if (residual.lpNorm<Eigen::Infinity>() < settings.newton_tol * scale) return NewtonResult{std::move(next), iter};
    const Tridiagonal<double> system = jacobian(next, grid, p, bc).scaled_shifted(-dt, 1.0);
    const auto delta = thomas_solve(system, Vector(-residual));
    if (!delta) return std::nullopt;
    next.s += *delta;
  }
  return std::nullopt;
}

namespace {

double scaled_error(const Vector& coarse, const Vector& fine, const SolverSettings& settings) {
  const Vector weight = (settings.abs_tol + settings.rel_tol * fine.array().abs()).matrix();
  return ((coarse - fine).array().abs() / weight.array()).maxCoeff();
}

std::string describe_underflow(double dt, const char* cause) {
  std::ostringstream os;
  os.precision(17);
  os << "step size underflow (" << cause << "), dt=" << dt;
  return os.str();
}

}  // namespace

Trace integrate(const State& initial, double t_end, const std::vector<double>& output_times, const Grid& grid,
                const Parameters& p, const BoundarySpec& bc, const SolverSettings& settings) {
  settings.validate();
  if (initial.s.size() != grid.n_cells) throw ConfigError("initial state does not match the grid");
  if (!(t_end >= initial.time)) throw ConfigError("t_end must not precede the initial time");

  std::vector<double> targets;
  for (double t : output_times) {
    if (t < initial.time || t > t_end) throw ConfigError("output time outside the integration interval");
    if (t > initial.time) targets.push_back(t);
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  if (targets.empty() || targets.back() < t_end) targets.push_back(t_end);
  if (t_end == initial.time) targets.clear();

  Trace trace;
  trace.states.push_back(initial);
  trace.net_inflow.push_back(net_boundary_inflow(initial, grid, p, bc));

  State current = initial;
  double dt = std::min(settings.dt_init, settings.dt_max);
  std::size_t next_target = 0;
  int rejected = 0;

  while (next_target < targets.size()) {
    const double target = targets[next_target];
    const double remaining = target - current.time;
    double h = std::min(dt, remaining);
    bool hits_target = h >= remaining || remaining - h <= 1e-12 * std::max(1.0, std::abs(target));
    if (hits_target) h = remaining;

    if (h < settings.dt_min && !hits_target) {
      trace.failure = SolverFailure{current.time, describe_underflow(h, "error control")};
      break;
    }

    auto full = newton_step(current, h, grid, p, bc, settings);
    std::optional<NewtonResult> first_half;
    std::optional<NewtonResult> second_half;
    if (full) first_half = newton_step(current, 0.5 * h, grid, p, bc, settings);
    if (first_half) second_half = newton_step(first_half->state, 0.5 * h, grid, p, bc, settings);

    if (!second_half) {
      ++rejected;
      dt = 0.5 * h;
      if (dt < settings.dt_min) {
        trace.failure = SolverFailure{current.time, describe_underflow(dt, "Newton failure")};
        break;
      }
      continue;
    }

    const double err = scaled_error(full->state.s, second_half->state.s, settings);
    const double factor = settings.safety / std::sqrt(std::max(err, 1e-12));
    if (err > 1.0) {
      ++rejected;
      dt = h * std::max(0.1, factor);
      if (dt < settings.dt_min) {
        trace.failure = SolverFailure{current.time, describe_underflow(dt, "error control")};
        break;
      }
      continue;
    }

    current = std::move(second_half->state);
    current.time = hits_target ? target : current.time;
    if (hits_target) ++next_target;
    trace.steps.push_back(
        StepStats{h, full->iterations + first_half->iterations + second_half->iterations, err, rejected});
    trace.states.push_back(current);
    trace.net_inflow.push_back(net_boundary_inflow(current, grid, p, bc));
    rejected = 0;

    const double proposed = h * std::min(factor, settings.max_growth);
    // A step shortened to land on an output time says little about the
    // attainable step size; do not let it shrink the next one.
    dt = hits_target ? std::max(proposed, dt) : proposed;
    dt = std::clamp(dt, settings.dt_min, settings.dt_max);
  }
  return trace;
}

}  // namespace stickyflow
