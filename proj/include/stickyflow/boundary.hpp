#pragma once

#include <functional>
#include <variant>

#include "stickyflow/model.hpp"

namespace stickyflow {

enum class ColumnEnd { top, bottom };

template <typename Scalar>
using TimeFunction = std::function<Scalar(Scalar)>;

/// Prescribed saturation at the boundary face.
template <typename Scalar>
struct Dirichlet {
  TimeFunction<Scalar> value;
};

/// Prescribed total mass flux; positive means inflow into the column at
/// either end.
template <typename Scalar>
struct Flux {
  TimeFunction<Scalar> inflow;
};

/// Flux proportional to the difference between inner and outer saturation.
template <typename Scalar>
struct Robin {
  Scalar beta = Scalar(1);
  Scalar s_out = Scalar(0);
};

template <typename Scalar>
using BoundaryCondition = std::variant<Dirichlet<Scalar>, Flux<Scalar>, Robin<Scalar>>;

template <typename Scalar>
struct BasicBoundarySpec {
  BoundaryCondition<Scalar> top;
  BoundaryCondition<Scalar> bottom;
};

using BoundarySpec = BasicBoundarySpec<double>;

template <typename Scalar = double>
BoundaryCondition<Scalar> dirichlet(Scalar value) {
  return Dirichlet<Scalar>{[value](Scalar) { return value; }};
}

template <typename Scalar = double>
BoundaryCondition<Scalar> flux(Scalar inflow) {
  return Flux<Scalar>{[inflow](Scalar) { return inflow; }};
}

template <typename Scalar = double>
BoundaryCondition<Scalar> no_flux() {
  return flux<Scalar>(Scalar(0));
}

template <typename Scalar = double>
BoundaryCondition<Scalar> robin(Scalar beta, Scalar s_out) {
  if (!(beta > Scalar(0))) throw ConfigError("Robin beta must be > 0");
  if (!(s_out >= Scalar(0) && s_out <= Scalar(1))) throw ConfigError("Robin s_out must lie in [0, 1]");
  return Robin<Scalar>{beta, s_out};
}

template <typename Scalar>
bool is_dirichlet(const BoundaryCondition<Scalar>& bc) {
  return std::holds_alternative<Dirichlet<Scalar>>(bc);
}

}  // namespace stickyflow
