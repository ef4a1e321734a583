#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/LU>

#include <random>

#include "stickyflow/discretization.hpp"

using namespace stickyflow;

namespace {

Parameters physics(double kappa, double alpha_g, double s_bar) {
  Parameters p;
  p.kappa = kappa;
  p.alpha_g = alpha_g;
  p.s_bar = s_bar;
  return p;
}

Grid small_grid(Eigen::Index n, double dz) {
  Grid g = build_grid(dz * static_cast<double>(n), dz);
  REQUIRE(g.n_cells == n);
  return g;
}

BoundarySpec random_boundary(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto one = [&]() -> BoundaryCondition<double> {
    switch (pick(rng)) {
      case 0:
        return dirichlet(unit(rng));
      case 1:
        return flux(unit(rng) - 0.5);
      default:
        return robin(0.1 + 2.0 * unit(rng), unit(rng));
    }
  };
  return BoundarySpec{one(), one()};
}

// Brute-force column-by-column central difference of rhs.
Eigen::MatrixXd fd_jacobian(const State& st, const Grid& g, const Parameters& p, const BoundarySpec& bc, double h) {
  const Eigen::Index n = g.n_cells;
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    State plus = st;
    State minus = st;
    plus.s[j] += h;
    minus.s[j] -= h;
    out.col(j) = (rhs(plus, g, p, bc) - rhs(minus, g, p, bc)) / (2 * h);
  }
  return out;
}

}  // namespace

TEST_CASE("build_grid") {
  const Grid g = build_grid(5.0, 0.01);
  CHECK(g.n_cells == 500);
  CHECK(g.dz == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(g.centers[0] == doctest::Approx(-5.0 + 0.005));
  CHECK(g.centers[g.n_cells - 1] == doctest::Approx(-0.005));
  CHECK(std::abs(static_cast<double>(g.n_cells) * g.dz - 5.0) < 1e-12);
  for (Eigen::Index i = 1; i < g.n_cells; ++i) CHECK(g.centers[i] > g.centers[i - 1]);

  const Grid one = build_grid(1.0, 1.0);
  CHECK(one.n_cells == 1);
  CHECK(one.dz == 1.0);
  CHECK(one.centers[0] == -0.5);

  const Grid odd = build_grid(5.0, 0.003);
  CHECK(odd.n_cells == 1667);
  CHECK(odd.dz == doctest::Approx(5.0 / 1667.0).epsilon(1e-15));
  CHECK(std::abs(static_cast<double>(odd.n_cells) * odd.dz - 5.0) < 1e-12);

  CHECK_THROWS_AS(build_grid(0.0, 0.01), ConfigError);
  CHECK_THROWS_AS(build_grid(5.0, 0.0), ConfigError);
  CHECK_THROWS_AS(build_grid(5.0, -0.1), ConfigError);
  CHECK_THROWS_AS(build_grid(1.0, 2.0), ConfigError);
}

TEST_CASE("interior_face_flux") {
  const auto p = physics(0.005, 0.5, 0.2303);
  CHECK(interior_face_flux(0.1, 0.1, 0.01, p) == 0.0);
  CHECK(interior_face_flux(0.2303, 0.2303, 0.01, p) == 0.0);
  // 0.1 + 0.5 * 0.1697^2
  CHECK(interior_face_flux(0.2, 0.4, 0.01, p) == doctest::Approx(0.114399045).epsilon(1e-13));
  CHECK(interior_face_flux(0.4, 0.2, 0.01, physics(0.0, 0.5, 0.2303)) == 0.0);
}

TEST_CASE("boundary_flux") {
  const BoundaryCondition<double> closed = no_flux();
  for (double t : {0.0, 1.0, 250.0}) {
    CHECK(boundary_flux(ColumnEnd::top, closed, 0.7, t) == 0.0);
    CHECK(boundary_flux(ColumnEnd::bottom, closed, 0.7, t) == 0.0);
  }
  CHECK(boundary_flux(ColumnEnd::top, robin(1.0, 0.5), 0.5, 0.0) == 0.0);
  CHECK(boundary_flux(ColumnEnd::bottom, robin(2.0, 0.1), 0.4, 0.0) == doctest::Approx(0.6));
  // Inflow is positive at both ends; the face flux changes orientation.
  CHECK(boundary_flux(ColumnEnd::top, flux(0.3), 0.0, 0.0) == 0.3);
  CHECK(boundary_flux(ColumnEnd::bottom, flux(0.3), 0.0, 0.0) == -0.3);
  CHECK_THROWS_AS(boundary_flux(ColumnEnd::top, dirichlet(0.0), 0.5, 0.0), std::logic_error);
  CHECK_THROWS_AS(robin(0.0, 0.5), ConfigError);
  CHECK_THROWS_AS(robin(1.0, 1.5), ConfigError);
}

TEST_CASE("ghost_value") {
  CHECK(ghost_value(0.0, 0.4) == -0.4);
  CHECK(ghost_value(0.3, 0.3) == 0.3);
  CHECK(ghost_value(0.2, 0.6) == doctest::Approx(-0.2));
}

TEST_CASE("rhs") {
  // Gravity drains any uniform state above s_bar, so only the sticky range
  // (or pure diffusion) gives steady constants.
  SUBCASE("uniform state is steady under no-flux") {
    const Grid g = small_grid(10, 0.1);
    for (double c : {0.0, 0.1, 0.2303}) {
      const State st{0.0, Vector::Constant(10, c)};
      CHECK(rhs(st, g, physics(0.005, 0.5, 0.2303), BoundarySpec{no_flux(), no_flux()}).isZero(0.0));
    }
    const State wet{0.0, Vector::Constant(10, 0.6)};
    CHECK(rhs(wet, g, physics(0.005, 0.0, 0.2303), BoundarySpec{no_flux(), no_flux()}).isZero(0.0));
    const Vector draining = rhs(wet, g, physics(0.005, 0.5, 0.2303), BoundarySpec{no_flux(), no_flux()});
    CHECK(draining[9] < 0.0);
    CHECK(draining[0] > 0.0);
  }
  SUBCASE("uniform state is steady under matching Robin") {
    const Grid g = small_grid(10, 0.1);
    const State st{0.0, Vector::Constant(10, 0.2)};
    const BoundarySpec bc{robin(1.5, 0.2), robin(0.7, 0.2)};
    CHECK(rhs(st, g, physics(0.005, 0.5, 0.2303), bc).isZero(0.0));
    const State wet{0.0, Vector::Constant(10, 0.45)};
    CHECK(rhs(wet, g, physics(0.005, 0.0, 0.2303), BoundarySpec{robin(1.5, 0.45), robin(0.7, 0.45)}).isZero(0.0));
  }
  SUBCASE("three cells by hand") {
    // F between cells 0|1: 0.25 + 0.5*0.2697^2 = 0.286369045
    // F between cells 1|2: 0.25 + 0.5*0.7697^2 = 0.546219045
    const Grid g = small_grid(3, 0.01);
    State st{0.0, Vector(3)};
    st.s << 0.0, 0.5, 1.0;
    const Vector r = rhs(st, g, physics(0.005, 0.5, 0.2303), BoundarySpec{no_flux(), no_flux()});
    CHECK(r[0] == doctest::Approx(28.6369045).epsilon(1e-12));
    CHECK(r[1] == doctest::Approx(25.985).epsilon(1e-12));
    CHECK(r[2] == doctest::Approx(-54.6219045).epsilon(1e-12));
  }
  SUBCASE("Dirichlet ghost makes the boundary face see the prescribed value") {
    const Grid g = small_grid(4, 0.25);
    State st{0.0, Vector::Constant(4, 0.3)};
    const auto p = physics(0.01, 0.0, 0.2);
    const Vector r = rhs(st, g, p, BoundarySpec{dirichlet(0.3), dirichlet(0.3)});
    CHECK(r.isZero(1e-15));
    const Vector drained = rhs(st, g, p, BoundarySpec{dirichlet(0.0), dirichlet(0.3)});
    // top face: kappa * (ghost - s) / dz = 0.01 * (-0.6) / 0.25
    CHECK(drained[3] == doctest::Approx(0.01 * -0.6 / 0.25 / 0.25));
  }
}

TEST_CASE("jacobian") {
  SUBCASE("no physics, no coupling") {
    const Grid g = small_grid(6, 0.1);
    State st{0.0, Vector::LinSpaced(6, 0.0, 1.0)};
    const auto jac = jacobian(st, g, physics(0.0, 0.0, 0.2), BoundarySpec{no_flux(), no_flux()});
    CHECK(jac.to_dense().isZero(0.0));
  }
  SUBCASE("pure diffusion Laplacian stencil") {
    const Grid g = small_grid(6, 0.1);
    const State st{0.0, Vector::Constant(6, 0.1)};
    const auto p = physics(0.005, 0.5, 0.2303);
    const auto jac = jacobian(st, g, p, BoundarySpec{no_flux(), no_flux()});
    const double c = p.kappa / (g.dz * g.dz);
    for (Eigen::Index i = 1; i + 1 < 6; ++i) {
      CHECK(jac.lower[i - 1] == doctest::Approx(c));
      CHECK(jac.diag[i] == doctest::Approx(-2 * c));
      CHECK(jac.upper[i] == doctest::Approx(c));
    }
    CHECK(jac.diag[0] == doctest::Approx(-c));
    CHECK(jac.diag[5] == doctest::Approx(-c));
  }
}

TEST_CASE("discretization properties on random states") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(unit(rng) * 30);
    const Grid g = small_grid(n, 0.005 + 0.05 * unit(rng));
    const auto p = physics(0.01 * unit(rng), unit(rng), 0.5 * unit(rng));
    State st{unit(rng), Vector(n)};
    for (Eigen::Index i = 0; i < n; ++i) st.s[i] = 1.2 * unit(rng);
    const bool closed = trial % 2 == 0;
    const BoundarySpec bc = closed ? BoundarySpec{no_flux(), no_flux()} : random_boundary(rng);
    CAPTURE(trial);

    // Telescoping: dz * sum(rhs) = F_top - F_bottom.
    const Vector r = rhs(st, g, p, bc);
    const double net = net_boundary_inflow(st, g, p, bc);
    const Vector faces = face_fluxes(st, g, p, bc);
    CHECK(std::abs(g.dz * r.sum() - net) <= 1e-13 * std::max(1.0, faces.cwiseAbs().maxCoeff()));
    if (closed) CHECK(net == 0.0);

    // Exact Jacobian against brute-force differences, column by column.
    const Eigen::MatrixXd exact = jacobian(st, g, p, bc).to_dense();
    const Eigen::MatrixXd fd = fd_jacobian(st, g, p, bc, 1e-7);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double scale = std::max(1.0, exact.col(j).cwiseAbs().maxCoeff());
      CHECK((exact.col(j) - fd.col(j)).cwiseAbs().maxCoeff() <= 1e-5 * scale);
    }

    // Monotone upwind: couplings to neighbours are never negative.
    const auto jac = jacobian(st, g, p, bc);
    CHECK(jac.upper.minCoeff() >= 0.0);
    CHECK(jac.lower.minCoeff() >= 0.0);
  }
}

TEST_CASE("central transport is conservative and has an exact Jacobian") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Grid g = small_grid(12, 0.01);
    g.transport = TransportScheme::central;
    const auto p = physics(0.001, 0.5, 0.2303);
    State st{0.0, Vector(12)};
    for (Eigen::Index i = 0; i < 12; ++i) st.s[i] = unit(rng);
    const BoundarySpec bc = random_boundary(rng);
    const Vector r = rhs(st, g, p, bc);
    CHECK(std::abs(g.dz * r.sum() - net_boundary_inflow(st, g, p, bc)) < 1e-13);
    const Eigen::MatrixXd exact = jacobian(st, g, p, bc).to_dense();
    const Eigen::MatrixXd fd = fd_jacobian(st, g, p, bc, 1e-7);
    CHECK((exact - fd).cwiseAbs().maxCoeff() <= 1e-5 * std::max(1.0, exact.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("thomas_solve") {
  Tridiagonal<double> a(4);
  a.diag << 4, 5, 6, 7;
  a.lower << 1, 1, 2;
  a.upper << 2, 1, 1;
  Vector b(4);
  b << 1, 2, 3, 4;
  const auto x = thomas_solve(a, b);
  REQUIRE(x);
  const Vector dense = a.to_dense().fullPivLu().solve(b);
  CHECK((*x - dense).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(((a * *x) - b).cwiseAbs().maxCoeff() < 1e-14);

  Tridiagonal<double> singular(2);
  singular.diag << 0, 1;
  CHECK_FALSE(thomas_solve(singular, Vector::Ones(2)).has_value());

  Tridiagonal<double> one(1);
  one.diag << 2;
  CHECK((*thomas_solve(one, Vector::Constant(1, 3.0)))[0] == 1.5);
}
