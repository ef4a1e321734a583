#pragma once

// Pointwise constitutive relations for the saturation equation
//
//   s_t = d/dz [ kappa * s_z + alpha_g * ((s - s_bar)^+)^2 ]
//
// on a vertical column z in (-h, 0). The first term is capillary diffusion,
// the second gravitational transport that is switched off below the residual
// saturation s_bar.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stickyflow {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename Scalar>
struct BasicParameters {
  Scalar kappa = Scalar(0.005);
  // The product alpha * g. The examples quote 2*alpha*g = 1.
  Scalar alpha_g = Scalar(0.5);
  Scalar s_bar = Scalar(0.111) / Scalar(0.482);
  // s = gamma * p. kappa is taken to already include any 1/gamma scaling.
  Scalar gamma = Scalar(1);
  Scalar depth_h = Scalar(5);

  /// Throws ConfigError naming the first violated bound.
  void validate() const {
    auto finite = [](Scalar v) { return std::isfinite(static_cast<double>(v)); };
    if (!finite(kappa) || kappa < Scalar(0)) throw ConfigError("kappa must be finite and >= 0");
    if (!finite(alpha_g) || alpha_g < Scalar(0)) throw ConfigError("alpha_g must be finite and >= 0");
    if (!finite(s_bar) || s_bar < Scalar(0) || s_bar >= Scalar(1))
      throw ConfigError("s_bar must lie in [0, 1)");
    if (!finite(gamma) || gamma <= Scalar(0)) throw ConfigError("gamma must be > 0");
    if (!finite(depth_h) || depth_h <= Scalar(0)) throw ConfigError("depth h must be > 0");
  }
};

using Parameters = BasicParameters<double>;

template <typename Scalar>
constexpr Scalar positive_part(Scalar x) {
  return std::max(x, Scalar(0));
}

/// alpha_g * ((s - s_bar)^+)^2. Continuously differentiable in s.
template <typename Scalar>
Scalar gravity_flux(Scalar s, const BasicParameters<Scalar>& p) {
  const Scalar excess = positive_part(s - p.s_bar);
  return p.alpha_g * excess * excess;
}

template <typename Scalar>
Scalar gravity_flux_derivative(Scalar s, const BasicParameters<Scalar>& p) {
  return Scalar(2) * p.alpha_g * positive_part(s - p.s_bar);
}

template <typename Scalar>
Scalar pressure_from_saturation(Scalar s, const BasicParameters<Scalar>& p) {
  return s / p.gamma;
}

}  // namespace stickyflow
