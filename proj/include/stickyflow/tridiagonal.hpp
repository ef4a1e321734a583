#pragma once

#include <Eigen/Core>
#include <cmath>
#include <optional>

namespace stickyflow {

/// Band storage for an n x n tridiagonal matrix. Row i holds
/// lower[i-1], diag[i], upper[i].
template <typename Scalar>
struct Tridiagonal {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vec lower;
  Vec diag;
  Vec upper;

  Tridiagonal() = default;
  explicit Tridiagonal(Eigen::Index n)
      : lower(Vec::Zero(n > 0 ? n - 1 : 0)), diag(Vec::Zero(n)), upper(Vec::Zero(n > 0 ? n - 1 : 0)) {}

  Eigen::Index size() const { return diag.size(); }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> to_dense() const {
    const Eigen::Index n = size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      m(i, i) = diag[i];
      if (i > 0) m(i, i - 1) = lower[i - 1];
      if (i + 1 < n) m(i, i + 1) = upper[i];
    }
    return m;
  }

  Vec operator*(const Vec& x) const {
    const Eigen::Index n = size();
    Vec y = diag.cwiseProduct(x);
    if (n > 1) {
      y.head(n - 1) += upper.cwiseProduct(x.tail(n - 1));
      y.tail(n - 1) += lower.cwiseProduct(x.head(n - 1));
    }
    return y;
  }

  /// scale * this + shift * I
  Tridiagonal scaled_shifted(Scalar scale, Scalar shift) const {
    Tridiagonal out = *this;
    out.lower *= scale;
    out.upper *= scale;
    out.diag = (diag * scale).array() + shift;
    return out;
  }
};

/// Thomas algorithm without pivoting. Returns nullopt when a pivot vanishes
/// or the result is not finite.
template <typename Scalar>
std::optional<typename Tridiagonal<Scalar>::Vec> thomas_solve(const Tridiagonal<Scalar>& a,
                                                              const typename Tridiagonal<Scalar>::Vec& rhs) {
  using Vec = typename Tridiagonal<Scalar>::Vec;
  const Eigen::Index n = a.size();
  if (n == 0) return Vec{};
  Vec c_prime(n);
  Vec x(n);
  Scalar pivot = a.diag[0];
  if (pivot == Scalar(0)) return std::nullopt;
  c_prime[0] = n > 1 ? a.upper[0] / pivot : Scalar(0);
  x[0] = rhs[0] / pivot;
  for (Eigen::Index i = 1; i < n; ++i) {
    pivot = a.diag[i] - a.lower[i - 1] * c_prime[i - 1];
    if (pivot == Scalar(0)) return std::nullopt;
    c_prime[i] = i + 1 < n ? a.upper[i] / pivot : Scalar(0);
    x[i] = (rhs[i] - a.lower[i - 1] * x[i - 1]) / pivot;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) x[i] -= c_prime[i] * x[i + 1];
  if (!x.allFinite()) return std::nullopt;
  return x;
}

}  // namespace stickyflow
