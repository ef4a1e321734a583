#pragma once

#include <Eigen/Core>
#include <cmath>

#include "stickyflow/model.hpp"

namespace stickyflow {

/// Face treatment of the gravity term. upwind is the Godunov flux; central
/// averages the two adjacent cells like a Galerkin discretization and is
/// oscillatory once the cell Peclet number 2*alpha_g*(s - s_bar)*dz/kappa
/// exceeds 2.
enum class TransportScheme { upwind, central };

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Uniform cell-centered mesh over (-h, 0). Cell 0 sits at the bottom of the
/// column, cell n_cells-1 at the surface.
template <typename Scalar>
struct BasicGrid {
  Eigen::Index n_cells = 0;
  Scalar depth_h = Scalar(0);
  Scalar dz = Scalar(0);
  VectorX<Scalar> centers;
  TransportScheme transport = TransportScheme::upwind;

  Scalar face(Eigen::Index k) const { return -depth_h + Scalar(k) * dz; }
};

using Grid = BasicGrid<double>;

/// n_cells = round(h / d); dz = h / n_cells so the cells partition (-h, 0)
/// exactly even when d does not divide h.
template <typename Scalar>
BasicGrid<Scalar> build_grid(Scalar depth_h, Scalar d, TransportScheme transport = TransportScheme::upwind) {
  if (!(depth_h > Scalar(0)) || !std::isfinite(static_cast<double>(depth_h)))
    throw ConfigError("grid depth h must be > 0");
  if (!(d > Scalar(0)) || d > depth_h) throw ConfigError("grid spacing d must lie in (0, h]");
  BasicGrid<Scalar> grid;
  grid.depth_h = depth_h;
  grid.transport = transport;
  grid.n_cells = static_cast<Eigen::Index>(std::llround(static_cast<double>(depth_h / d)));
  if (grid.n_cells < 1) grid.n_cells = 1;
  grid.dz = depth_h / Scalar(grid.n_cells);
  grid.centers.resize(grid.n_cells);
  for (Eigen::Index i = 0; i < grid.n_cells; ++i)
    grid.centers[i] = -depth_h + (Scalar(i) + Scalar(0.5)) * grid.dz;
  return grid;
}

template <typename Scalar>
struct BasicState {
  Scalar time = Scalar(0);
  VectorX<Scalar> s;
};

using State = BasicState<double>;
using Vector = VectorX<double>;

}  // namespace stickyflow
