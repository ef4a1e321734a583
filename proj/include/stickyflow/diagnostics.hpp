#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stickyflow/grid.hpp"
#include "stickyflow/model.hpp"
#include "stickyflow/timestepper.hpp"

namespace stickyflow {

/// Trapezoidal rule over the piecewise-linear interpolant of the cell-center
/// values, extended as a constant over the half cells at both ends:
///
///   dz * (s_0/2 + s_1 + ... + s_{n-2} + s_{n-1}/2) + dz/2 * (s_0 + s_{n-1})
///     = dz * sum_i s_i
///
/// which is exactly the quantity conserved by the flux-difference scheme.
double mass_integral(const State& state, const Grid& grid);

struct MassRecord {
  double t = 0.0;
  double mass = 0.0;
  double drift = 0.0;
};

/// drift(t) = mass(t) - mass(0) - integral_0^t (F_top - F_bottom), with the
/// boundary-flux integral accumulated by the trapezoidal rule over accepted
/// steps.
std::vector<MassRecord> mass_balance_audit(const Trace& trace, const Grid& grid);

struct Extrema {
  double t = 0.0;
  double s_min = 0.0;
  double s_max = 0.0;
};

std::vector<Extrema> extrema_series(const Trace& trace);

enum class EventKind { max_below_sbar, maxmin_below_gap, front_depth };

std::string to_string(EventKind kind);

struct EventReport {
  EventKind kind = EventKind::max_below_sbar;
  double time = 0.0;
  double value = 0.0;
  double threshold = 0.0;
};

/// First time at which values drops below threshold, linearly interpolated
/// between the bracketing samples.
std::optional<double> first_time_below(const std::vector<double>& times, const std::vector<double>& values,
                                       double threshold);

/// Time after which values stays below threshold for the rest of the series.
std::optional<double> time_staying_below(const std::vector<double>& times, const std::vector<double>& values,
                                         double threshold);

/// Deepest z at which the profile exceeds threshold, interpolated between the
/// first wet cell center and the one below it.
std::optional<double> wetting_front_depth(const Vector& s, const Grid& grid, double threshold);

/// max_below_sbar: first time s_max < threshold. value = threshold.
/// maxmin_below_gap: time after which s_max - s_min < threshold. value = threshold.
/// front_depth: wetting front depth at `at_time` (required). value = z.
std::optional<EventReport> detect_event(const Trace& trace, const Grid& grid, EventKind kind, double threshold,
                                        std::optional<double> at_time = std::nullopt);

struct InstabilityMetrics {
  double undershoot = 0.0;
  double overshoot = 0.0;
  int zigzag = 0;
};

/// undershoot = max(0, -min s), overshoot = max(0, max s - 1).
/// zigzag counts first differences d_k (|d_k| > zigzag_threshold) whose sign
/// is opposite to both neighbouring differences, which must also exceed the
/// threshold: a sawtooth, not a single smooth hump.
InstabilityMetrics instability_metrics(const Vector& s, double zigzag_threshold = 1e-3);

class OracleInvalid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pre-shock solution of s_t - 2 alpha_g s s_z = 0 (kappa = 0, s_bar = 0) by
/// the method of characteristics: solves s = ic(z + 2 alpha_g s t) for s in
/// [0, 1.2]. Throws OracleInvalid if the root is not unique.
double characteristics_oracle(const std::function<double(double)>& ic, double z, double t, const Parameters& p);

}  // namespace stickyflow
