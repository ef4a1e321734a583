#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stickyflow/diagnostics.hpp"
#include "stickyflow/scenarios.hpp"

using namespace stickyflow;

namespace {

Trace synthetic_trace(const std::vector<double>& times, const std::vector<Vector>& profiles) {
  Trace tr;
  for (std::size_t k = 0; k < times.size(); ++k) {
    tr.states.push_back(State{times[k], profiles[k]});
    tr.net_inflow.push_back(0.0);
  }
  return tr;
}

Vector two(double lo, double hi) {
  Vector v(2);
  v << lo, hi;
  return v;
}

}  // namespace

TEST_CASE("mass_integral") {
  const Grid g = build_grid(5.0, 0.01);
  CHECK(mass_integral(State{0.0, Vector::Constant(g.n_cells, 0.5)}, g) == doctest::Approx(2.5).epsilon(1e-13));
  // 1 * 0.5 + 0.5 * 0.01 * 1
  CHECK(std::abs(mass_integral(example1().initial_state(), g) - 0.505) < 1e-3);
  // integral of -0.5 z over (-2, 0) plus the 0.01-wide ramp
  CHECK(std::abs(mass_integral(example3(0.005).initial_state(), g) - 1.005) < 1e-3);
}

TEST_CASE("mass_balance_audit") {
  SUBCASE("zero physics gives zero drift") {
    Scenario sc = example1();
    sc.params.kappa = 0.0;
    sc.params.alpha_g = 0.0;
    const Grid g = sc.grid();
    const Trace tr = integrate(sc.initial_state(), 10.0, {5.0}, g, sc.params, sc.boundary());
    for (const auto& m : mass_balance_audit(tr, g)) CHECK(m.drift == 0.0);
  }

  SUBCASE("constant top inflow grows mass linearly") {
    Scenario sc = example1();
    sc.d = 0.05;
    const double c = 0.02;
    sc.top = BoundaryDescriptor{BoundaryDescriptor::Kind::flux, c};
    const Grid g = sc.grid();
    const double T = 2.0;
    const Trace tr = integrate(sc.initial_state(), T, {T}, g, sc.params, sc.boundary());
    REQUIRE(tr.completed());
    const auto audit = mass_balance_audit(tr, g);
    CHECK(std::abs(audit.back().mass - audit.front().mass - c * T) <= 1e-4 * T);
    CHECK(std::abs(audit.back().drift) <= 1e-4 * T);
  }
}

TEST_CASE("extrema_series") {
  const auto tr = synthetic_trace({0.0}, {Vector::Constant(4, 0.3)});
  const auto e = extrema_series(tr);
  CHECK(e[0].s_min == 0.3);
  CHECK(e[0].s_max == 0.3);

  const auto e1 = extrema_series(synthetic_trace({0.0}, {example1().initial_state().s}));
  CHECK(e1[0].s_min == 0.0);
  CHECK(e1[0].s_max == 1.0);
  const auto e2 = extrema_series(synthetic_trace({0.0}, {example2().initial_state().s}));
  CHECK(e2[0].s_min == 0.0);
  CHECK(e2[0].s_max == doctest::Approx(0.3));
}

TEST_CASE("detect_event") {
  const Grid g = build_grid(1.0, 0.5);

  SUBCASE("crossing exactly at a sample") {
    const auto tr = synthetic_trace({0.0, 1.0, 2.0, 3.0}, {two(0, 0.9), two(0, 0.7), two(0, 0.5), two(0, 0.3)});
    // s_max hits 0.5 at t = 2 but is not below it until after.
    const auto e = detect_event(tr, g, EventKind::max_below_sbar, 0.5);
    REQUIRE(e);
    CHECK(e->time == doctest::Approx(2.0));
    const auto at = first_time_below({0, 1, 2}, {0.9, 0.7, 0.5}, 0.7000001);
    REQUIRE(at);
    CHECK(*at == doctest::Approx(1.0).epsilon(1e-5));
  }

  SUBCASE("linear interpolation inside the bracket") {
    const auto tr = synthetic_trace({0.0, 10.0}, {two(0, 0.4), two(0, 0.2)});
    const auto e = detect_event(tr, g, EventKind::max_below_sbar, 0.25);
    REQUIRE(e);
    CHECK(e->time == doctest::Approx(7.5));
    CHECK(e->time >= 0.0);
    CHECK(e->time <= 10.0);
    CHECK_FALSE(detect_event(tr, g, EventKind::max_below_sbar, 0.1).has_value());
  }

  SUBCASE("gap must stay below for the rest of the trace") {
    const auto tr = synthetic_trace({0, 1, 2, 3, 4}, {two(0, 0.5), two(0, 0.05), two(0, 0.2), two(0, 0.08), two(0, 0.02)});
    const auto e = detect_event(tr, g, EventKind::maxmin_below_gap, 0.1);
    REQUIRE(e);
    // last sample with gap >= 0.1 is t=2 (0.2), crossing towards 0.08 at t=3
    CHECK(e->time == doctest::Approx(2.0 + (0.2 - 0.1) / (0.2 - 0.08)));
    const auto still_wide = synthetic_trace({0, 1}, {two(0, 0.5), two(0, 0.4)});
    CHECK_FALSE(detect_event(still_wide, g, EventKind::maxmin_below_gap, 0.1).has_value());
  }

  SUBCASE("front depth") {
    const Grid g4 = build_grid(4.0, 1.0);  // centers -3.5, -2.5, -1.5, -0.5
    Vector s(4);
    s << 0.0, 0.02, 0.12, 0.5;
    const auto tr = synthetic_trace({0.0}, {s});
    const auto e = detect_event(tr, g4, EventKind::front_depth, 0.05, 0.0);
    REQUIRE(e);
    CHECK(e->value == doctest::Approx(-2.5 + (0.05 - 0.02) / (0.12 - 0.02)));
    CHECK_THROWS(detect_event(tr, g4, EventKind::front_depth, 0.05));
    CHECK_FALSE(wetting_front_depth(Vector::Zero(4), g4, 0.05).has_value());
  }

  SUBCASE("subsampling keeps the event inside the wider bracket") {
    std::vector<double> times;
    std::vector<Vector> profiles;
    for (int k = 0; k <= 20; ++k) {
      times.push_back(k);
      profiles.push_back(two(0.0, 1.0 - 0.003 * k * k));
    }
    const auto full = detect_event(synthetic_trace(times, profiles), g, EventKind::max_below_sbar, 0.6);
    REQUIRE(full);
    std::vector<double> t2;
    std::vector<Vector> p2;
    for (int k = 0; k <= 20; k += 4) {
      t2.push_back(times[k]);
      p2.push_back(profiles[k]);
    }
    const auto coarse = detect_event(synthetic_trace(t2, p2), g, EventKind::max_below_sbar, 0.6);
    REQUIRE(coarse);
    CHECK(std::abs(coarse->time - full->time) < 4.0);
  }
}

TEST_CASE("instability_metrics") {
  Vector mono = Vector::LinSpaced(50, 0.0, 1.0);
  auto m = instability_metrics(mono);
  CHECK(m.undershoot == 0.0);
  CHECK(m.overshoot == 0.0);
  CHECK(m.zigzag == 0);

  Vector wiggle(5);
  wiggle << 0, 0.1, -0.05, 0.1, 0;
  m = instability_metrics(wiggle);
  CHECK(m.undershoot == doctest::Approx(0.05));
  CHECK(m.zigzag >= 2);

  // A single smooth hump is not an oscillation.
  Vector hump(9);
  hump << 0, 0.2, 0.4, 0.6, 0.8, 0.6, 0.4, 0.2, 0;
  CHECK(instability_metrics(hump).zigzag == 0);

  Vector high = Vector::Constant(3, 1.25);
  CHECK(instability_metrics(high).overshoot == doctest::Approx(0.25));

  // Rounding-level noise stays below the 1e-3 threshold.
  Vector noisy(6);
  noisy << 0.5, 0.5001, 0.5, 0.5001, 0.5, 0.5001;
  CHECK(instability_metrics(noisy).zigzag == 0);
}

TEST_CASE("characteristics_oracle") {
  Parameters p;
  p.kappa = 0.0;
  p.s_bar = 0.0;
  p.alpha_g = 0.5;

  const auto constant = [](double) { return 0.37; };
  for (double z : {-4.0, -1.0, 0.0})
    for (double t : {0.0, 1.0, 7.0}) CHECK(characteristics_oracle(constant, z, t, p) == doctest::Approx(0.37).epsilon(1e-9));

  const double a = 0.1;
  const double b = 0.5;
  const auto linear = [a, b](double z) { return a * z + b; };
  for (double t : {0.0, 0.5, 2.0, 5.0}) {
    for (double z : {-4.0, -2.5, -1.0}) {
      const double expected = (a * z + b) / (1.0 - 2.0 * p.alpha_g * a * t);
      CHECK(characteristics_oracle(linear, z, t, p) == doctest::Approx(expected).epsilon(1e-9));
    }
  }

  const auto ramp = [](double z) { return std::clamp(0.2 * (z + 3.0), 0.0, 1.0); };
  CHECK(characteristics_oracle(ramp, -2.0, 0.0, p) == doctest::Approx(0.2).epsilon(1e-9));

  // Past shock formation the characteristic relation has several roots.
  const auto steep = [](double z) { return z < -1.0 ? 0.0 : std::min(1.0, 10.0 * (z + 1.0)); };
  CHECK_THROWS_AS(characteristics_oracle(steep, -1.3, 1.0, p), OracleInvalid);
}
