#pragma once

// Conservative cell-centered finite volumes for
//
//   s_t = dF/dz,   F = kappa * s_z + alpha_g * ((s - s_bar)^+)^2.
//
// F > 0 at a face moves mass downward: the face adds F/dz to the cell below
// and removes F/dz from the cell above. The hyperbolic part has non-positive
// wave speed, so the Godunov flux takes the gravity term from the upper cell.

#include <stdexcept>
#include <type_traits>
#include <utility>
#include <variant>

#include "stickyflow/boundary.hpp"
#include "stickyflow/grid.hpp"
#include "stickyflow/model.hpp"
#include "stickyflow/tridiagonal.hpp"

namespace stickyflow {

template <typename Scalar>
Scalar interior_face_flux(Scalar s_lower, Scalar s_upper, Scalar dz, const BasicParameters<Scalar>& p,
                          TransportScheme transport = TransportScheme::upwind) {
  const Scalar transported = transport == TransportScheme::upwind
                                 ? gravity_flux(s_upper, p)
                                 : Scalar(0.5) * (gravity_flux(s_lower, p) + gravity_flux(s_upper, p));
  return p.kappa * (s_upper - s_lower) / dz + transported;
}

/// Partial derivatives of interior_face_flux with respect to (s_lower, s_upper).
template <typename Scalar>
std::pair<Scalar, Scalar> interior_face_flux_derivatives(Scalar s_lower, Scalar s_upper, Scalar dz,
                                                         const BasicParameters<Scalar>& p,
                                                         TransportScheme transport = TransportScheme::upwind) {
  if (transport == TransportScheme::upwind) {
    return {-p.kappa / dz, p.kappa / dz + gravity_flux_derivative(s_upper, p)};
  }
  return {-p.kappa / dz + Scalar(0.5) * gravity_flux_derivative(s_lower, p),
          p.kappa / dz + Scalar(0.5) * gravity_flux_derivative(s_upper, p)};
}

/// Reflected ghost value so that the cell/ghost average equals the
/// prescribed boundary saturation. Ghosts are not saturations and may be
/// negative.
template <typename Scalar>
Scalar ghost_value(Scalar dirichlet_value, Scalar boundary_cell_s) {
  return Scalar(2) * dirichlet_value - boundary_cell_s;
}

/// Face flux F at a Flux or Robin boundary, in the same orientation as the
/// interior faces (so inflow at the top is F > 0, inflow at the bottom F < 0).
template <typename Scalar>
Scalar boundary_flux(ColumnEnd end, const BoundaryCondition<Scalar>& bc, Scalar boundary_cell_s, Scalar t) {
  const Scalar sign = end == ColumnEnd::top ? Scalar(1) : Scalar(-1);
  return std::visit(
      [&](const auto& c) -> Scalar {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Flux<Scalar>>) {
          return sign * c.inflow(t);
        } else if constexpr (std::is_same_v<T, Robin<Scalar>>) {
          return -sign * c.beta * (boundary_cell_s - c.s_out);
        } else {
          throw std::logic_error("boundary_flux called with a Dirichlet condition");
        }
      },
      bc);
}

namespace detail {

// Face flux at a boundary and its derivative with respect to the adjacent
// cell value.
template <typename Scalar>
std::pair<Scalar, Scalar> boundary_face(ColumnEnd end, const BoundaryCondition<Scalar>& bc, Scalar s_cell, Scalar t,
                                        Scalar dz, const BasicParameters<Scalar>& p, TransportScheme transport) {
  if (const auto* d = std::get_if<Dirichlet<Scalar>>(&bc)) {
    // d(ghost)/d(s_cell) = -1
    const Scalar ghost = ghost_value(d->value(t), s_cell);
    if (end == ColumnEnd::top) {
      const auto [d_cell, d_ghost] = interior_face_flux_derivatives(s_cell, ghost, dz, p, transport);
      return {interior_face_flux(s_cell, ghost, dz, p, transport), d_cell - d_ghost};
    }
    const auto [d_ghost, d_cell] = interior_face_flux_derivatives(ghost, s_cell, dz, p, transport);
    return {interior_face_flux(ghost, s_cell, dz, p, transport), d_cell - d_ghost};
  }
  Scalar derivative = Scalar(0);
  if (const auto* r = std::get_if<Robin<Scalar>>(&bc)) derivative = end == ColumnEnd::top ? -r->beta : r->beta;
  return {boundary_flux(end, bc, s_cell, t), derivative};
}

}  // namespace detail

/// All n_cells + 1 face fluxes; entry k is the face at z = -h + k*dz.
template <typename Scalar>
VectorX<Scalar> face_fluxes(const BasicState<Scalar>& state, const BasicGrid<Scalar>& grid,
                            const BasicParameters<Scalar>& p, const BasicBoundarySpec<Scalar>& bc) {
  const Eigen::Index n = grid.n_cells;
  const auto& s = state.s;
  VectorX<Scalar> f(n + 1);
  f[0] = detail::boundary_face(ColumnEnd::bottom, bc.bottom, s[0], state.time, grid.dz, p, grid.transport).first;
  for (Eigen::Index k = 1; k < n; ++k) f[k] = interior_face_flux(s[k - 1], s[k], grid.dz, p, grid.transport);
  f[n] = detail::boundary_face(ColumnEnd::top, bc.top, s[n - 1], state.time, grid.dz, p, grid.transport).first;
  return f;
}

/// Net boundary inflow F_top - F_bottom; equals the rate of change of dz * sum(s).
template <typename Scalar>
Scalar net_boundary_inflow(const BasicState<Scalar>& state, const BasicGrid<Scalar>& grid,
                           const BasicParameters<Scalar>& p, const BasicBoundarySpec<Scalar>& bc) {
  const Eigen::Index n = grid.n_cells;
  const Scalar bottom = detail::boundary_face(ColumnEnd::bottom, bc.bottom, state.s[0], state.time, grid.dz, p, grid.transport).first;
  const Scalar top = detail::boundary_face(ColumnEnd::top, bc.top, state.s[n - 1], state.time, grid.dz, p, grid.transport).first;
  return top - bottom;
}

/// ds_i/dt = (F_{i+1/2} - F_{i-1/2}) / dz
template <typename Scalar>
VectorX<Scalar> rhs(const BasicState<Scalar>& state, const BasicGrid<Scalar>& grid, const BasicParameters<Scalar>& p,
                    const BasicBoundarySpec<Scalar>& bc) {
  const VectorX<Scalar> f = face_fluxes(state, grid, p, bc);
  const Eigen::Index n = grid.n_cells;
  return (f.tail(n) - f.head(n)) / grid.dz;
}

/// Exact tridiagonal d(rhs)/ds.
template <typename Scalar>
Tridiagonal<Scalar> jacobian(const BasicState<Scalar>& state, const BasicGrid<Scalar>& grid,
                             const BasicParameters<Scalar>& p, const BasicBoundarySpec<Scalar>& bc) {
  const Eigen::Index n = grid.n_cells;
  const Scalar dz = grid.dz;
  const auto& s = state.s;
  Tridiagonal<Scalar> jac(n);
  for (Eigen::Index k = 1; k < n; ++k) {
    const auto [dfl, dfu] = interior_face_flux_derivatives(s[k - 1], s[k], dz, p, grid.transport);
    const Scalar d_lower = dfl / dz;
    const Scalar d_upper = dfu / dz;
    // cell k-1 gains F/dz, cell k loses it
    jac.diag[k - 1] += d_lower;
    jac.upper[k - 1] += d_upper;
    jac.lower[k - 1] -= d_lower;
    jac.diag[k] -= d_upper;
  }
  jac.diag[0] -= detail::boundary_face(ColumnEnd::bottom, bc.bottom, s[0], state.time, dz, p, grid.transport).second / dz;
  jac.diag[n - 1] += detail::boundary_face(ColumnEnd::top, bc.top, s[n - 1], state.time, dz, p, grid.transport).second / dz;
  return jac;
}

}  // namespace stickyflow
