#include "stickyflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace stickyflow {

double mass_integral(const State& state, const Grid& grid) { return grid.dz * state.s.sum(); }

std::vector<MassRecord> mass_balance_audit(const Trace& trace, const Grid& grid) {
  std::vector<MassRecord> out;
  if (trace.states.empty()) return out;
  out.reserve(trace.size());
  const double mass0 = mass_integral(trace.states.front(), grid);
  double inflow = 0.0;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (k > 0) {
      const double dt = trace.states[k].time - trace.states[k - 1].time;
      inflow += 0.5 * dt * (trace.net_inflow[k - 1] + trace.net_inflow[k]);
    }
    const double mass = mass_integral(trace.states[k], grid);
    out.push_back(MassRecord{trace.states[k].time, mass, mass - mass0 - inflow});
  }
  return out;
}

std::vector<Extrema> extrema_series(const Trace& trace) {
  std::vector<Extrema> out;
  out.reserve(trace.size());
  for (const auto& st : trace.states) out.push_back(Extrema{st.time, st.s.minCoeff(), st.s.maxCoeff()});
  return out;
}

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::max_below_sbar:
      return "max_below_sbar";
    case EventKind::maxmin_below_gap:
      return "maxmin_below_gap";
    case EventKind::front_depth:
      return "front_depth";
  }
  return "unknown";
}

namespace {

double crossing_time(double t0, double v0, double t1, double v1, double threshold) {
  if (v0 == v1) return t1;
  const double w = std::clamp((v0 - threshold) / (v0 - v1), 0.0, 1.0);
  return t0 + w * (t1 - t0);
}

}  // namespace

std::optional<double> first_time_below(const std::vector<double>& times, const std::vector<double>& values,
                                       double threshold) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] < threshold) {
      if (k == 0) return times[0];
      return crossing_time(times[k - 1], values[k - 1], times[k], values[k], threshold);
    }
  }
  return std::nullopt;
}

std::optional<double> time_staying_below(const std::vector<double>& times, const std::vector<double>& values,
                                         double threshold) {
  if (values.empty()) return std::nullopt;
  std::size_t k = values.size();
  while (k > 0 && values[k - 1] < threshold) --k;
  if (k == values.size()) return std::nullopt;
  if (k == 0) return times[0];
  return crossing_time(times[k - 1], values[k - 1], times[k], values[k], threshold);
}

std::optional<double> wetting_front_depth(const Vector& s, const Grid& grid, double threshold) {
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > threshold) {
      if (i == 0) return grid.centers[0];
      const double w = (threshold - s[i - 1]) / (s[i] - s[i - 1]);
      return grid.centers[i - 1] + w * (grid.centers[i] - grid.centers[i - 1]);
    }
  }
  return std::nullopt;
}

std::optional<EventReport> detect_event(const Trace& trace, const Grid& grid, EventKind kind, double threshold,
                                        std::optional<double> at_time) {
  if (trace.states.empty()) return std::nullopt;
  if (kind == EventKind::front_depth) {
    if (!at_time) throw std::invalid_argument("front_depth needs an evaluation time");
    const auto& states = trace.states;
    if (*at_time < states.front().time || *at_time > states.back().time) return std::nullopt;
    auto it = std::lower_bound(states.begin(), states.end(), *at_time,
                               [](const State& st, double value) { return st.time < value; });
    Vector profile = it->s;
    if (it->time != *at_time) {
      const auto& prev = *(it - 1);
      const double w = (*at_time - prev.time) / (it->time - prev.time);
      profile = (1.0 - w) * prev.s + w * it->s;
    }
    const auto depth = wetting_front_depth(profile, grid, threshold);
    if (!depth) return std::nullopt;
    return EventReport{kind, *at_time, *depth, threshold};
  }

  std::vector<double> times;
  std::vector<double> values;
  times.reserve(trace.size());
  values.reserve(trace.size());
  for (const auto& e : extrema_series(trace)) {
    times.push_back(e.t);
    values.push_back(kind == EventKind::max_below_sbar ? e.s_max : e.s_max - e.s_min);
  }
  const auto t = kind == EventKind::max_below_sbar ? first_time_below(times, values, threshold)
                                                   : time_staying_below(times, values, threshold);
  if (!t) return std::nullopt;
  return EventReport{kind, *t, threshold, threshold};
}

InstabilityMetrics instability_metrics(const Vector& s, double zigzag_threshold) {
  InstabilityMetrics m;
  if (s.size() == 0) return m;
  m.undershoot = std::max(0.0, -s.minCoeff());
  m.overshoot = std::max(0.0, s.maxCoeff() - 1.0);
  const Eigen::Index n = s.size();
  auto sign_of = [&](Eigen::Index k) {
    const double d = s[k + 1] - s[k];
    if (std::abs(d) <= zigzag_threshold) return 0;
    return d > 0.0 ? 1 : -1;
  };
  for (Eigen::Index k = 1; k + 2 < n; ++k) {
    const int here = sign_of(k);
    if (here != 0 && sign_of(k - 1) == -here && sign_of(k + 1) == -here) ++m.zigzag;
  }
  return m;
}

double characteristics_oracle(const std::function<double(double)>& ic, double z, double t, const Parameters& p) {
  constexpr double lo = 0.0;
  constexpr double hi = 1.2;
  constexpr int samples = 2400;
  auto residual = [&](double s) { return s - ic(z + 2.0 * p.alpha_g * s * t); };

  int roots = 0;
  double a = lo;
  double b = hi;
  double prev_s = lo;
  double prev_r = residual(lo);
  if (prev_r == 0.0) {
    ++roots;
    a = b = lo;
  }
  for (int k = 1; k <= samples; ++k) {
    const double s = lo + (hi - lo) * k / samples;
    const double r = residual(s);
    if (r == 0.0 || (prev_r < 0.0) != (r < 0.0)) {
      if (prev_r != 0.0) {
        ++roots;
        a = prev_s;
        b = s;
      }
    }
    prev_s = s;
    prev_r = r;
  }
  if (roots == 0) throw OracleInvalid("characteristic relation has no root in [0, 1.2]");
  if (roots > 1) throw OracleInvalid("characteristic relation has several roots (past shock formation)");

  double ra = residual(a);
  while (b - a > 1e-10) {
    const double mid = 0.5 * (a + b);
    const double rm = residual(mid);
    if (rm == 0.0) return mid;
    if ((rm < 0.0) == (ra < 0.0)) {
      a = mid;
      ra = rm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace stickyflow
