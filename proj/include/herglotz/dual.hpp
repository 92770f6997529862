#pragma once

#include <cmath>
#include <type_traits>

#include <Eigen/Core>

namespace herglotz {

/// First-order Taylor pair: value plus the derivative with respect to one or
/// more seeds. `Gradient` is a scalar or a fixed-size Eigen vector.
template <typename Gradient>
struct Dual {
  double value = 0.0;
  Gradient grad{};

  static Dual constant(double v) {
    Dual d;
    d.value = v;
    d.grad = zero_gradient();
    return d;
  }

  static Gradient zero_gradient() {
    if constexpr (std::is_arithmetic_v<Gradient>) {
      return Gradient{0};
    } else {
      return Gradient::Zero();
    }
  }

  bool has_nonzero_seed() const {
    if constexpr (std::is_arithmetic_v<Gradient>) {
      return grad != Gradient{0};
    } else {
      return !grad.isZero(0.0);
    }
  }
};

template <typename G>
Dual<G> operator+(const Dual<G>& a, const Dual<G>& b) {
  return {a.value + b.value, a.grad + b.grad};
}

template <typename G>
Dual<G> operator-(const Dual<G>& a, const Dual<G>& b) {
  return {a.value - b.value, a.grad - b.grad};
}

template <typename G>
Dual<G> operator-(const Dual<G>& a) {
  return {-a.value, -a.grad};
}

template <typename G>
Dual<G> operator*(const Dual<G>& a, const Dual<G>& b) {
  return {a.value * b.value, b.value * a.grad + a.value * b.grad};
}

template <typename G>
Dual<G> operator/(const Dual<G>& a, const Dual<G>& b) {
  const double inv = 1.0 / b.value;
  return {a.value * inv, (a.grad - (a.value * inv) * b.grad) * inv};
}

/// Applies a scalar function with known derivative: f(a), f'(a) * a'.
template <typename G>
Dual<G> chain(const Dual<G>& a, double f, double dfda) {
  return {f, dfda * a.grad};
}

using Partials7 = Eigen::Matrix<double, 7, 1>;

}  // namespace herglotz
