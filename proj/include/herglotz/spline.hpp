#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>

#include <Eigen/Core>

namespace herglotz {

/// Solves the symmetric tridiagonal system tridiag(1, 4, 1) x = rhs in place
/// (Thomas algorithm; the matrix is strictly diagonally dominant).
template <typename Scalar>
void solve_spline_system(Eigen::Ref<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> rhs) {
  const Eigen::Index n = rhs.size();
  if (n == 0) return;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c(n);
  Scalar diag = Scalar(4);
  c(0) = Scalar(1) / diag;
  rhs(0) /= diag;
  for (Eigen::Index i = 1; i < n; ++i) {
    diag = Scalar(4) - c(i - 1);
    c(i) = Scalar(1) / diag;
    rhs(i) = (rhs(i) - rhs(i - 1)) / diag;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) rhs(i) -= c(i) * rhs(i + 1);
}

/// Natural cubic spline through values on the uniform knots t0 + k h.
template <typename Scalar>
class UniformCubicSpline {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Value {
    Scalar f;
    Scalar df;
    Scalar ddf;
  };

  UniformCubicSpline() = default;

  UniformCubicSpline(Scalar t0, Scalar h, Vector values)
      : t0_(t0), h_(h), y_(std::move(values)) {
    assert(y_.size() >= 2);
    const Eigen::Index n = y_.size() - 1;
    m_ = Vector::Zero(n + 1);
    if (n >= 2) {
      const Scalar c = Scalar(6) / (h_ * h_);
      Vector rhs(n - 1);
      for (Eigen::Index k = 1; k < n; ++k) rhs(k - 1) = c * (y_(k - 1) - Scalar(2) * y_(k) + y_(k + 1));
      solve_spline_system<Scalar>(rhs);
      m_.segment(1, n - 1) = rhs;
    }
  }

  Eigen::Index intervals() const { return y_.size() - 1; }
  Scalar start() const { return t0_; }
  Scalar end() const { return t0_ + h_ * Scalar(intervals()); }
  Scalar step() const { return h_; }
  const Vector& values() const { return y_; }
  const Vector& second_derivatives() const { return m_; }

  /// Interval k and local coordinate u in [0, 1] for t; exact at knots.
  void locate(Scalar t, Eigen::Index& k, Scalar& u) const {
    const Scalar s = (t - t0_) / h_;
    Scalar r = std::round(s);
    if (std::abs(s - r) <= Scalar(1e-9)) {
      k = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(r), 0, intervals());
      u = Scalar(0);
      if (k == intervals()) {
        k = intervals() - 1;
        u = Scalar(1);
      }
      return;
    }
    k = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(s)), 0, intervals() - 1);
    u = s - Scalar(k);
  }

  Value eval(Scalar t) const {
    Eigen::Index k;
    Scalar u;
    locate(t, k, u);
    return eval_local(k, u);
  }

  Value eval_local(Eigen::Index k, Scalar u) const {
    const Scalar v = Scalar(1) - u;
    const Scalar h2 = h_ * h_ / Scalar(6);
    Value out;
    if (u == Scalar(0)) {
      out.f = y_(k);
    } else if (u == Scalar(1)) {
      out.f = y_(k + 1);
    } else {
      out.f = v * y_(k) + u * y_(k + 1) + h2 * ((v * v * v - v) * m_(k) + (u * u * u - u) * m_(k + 1));
    }
    out.df = (y_(k + 1) - y_(k)) / h_ +
             h_ / Scalar(6) * ((Scalar(1) - Scalar(3) * v * v) * m_(k) + (Scalar(3) * u * u - Scalar(1)) * m_(k + 1));
    out.ddf = v * m_(k) + u * m_(k + 1);
    return out;
  }

  /// Reverse-mode sweep: accumulate sensitivities of a scalar functional
  /// sum_j (wf_j f(t_j) + wdf_j f'(t_j)) with respect to the knot values.
  class Adjoint {
   public:
    explicit Adjoint(const UniformCubicSpline& s)
        : spline_(s), gy_(Vector::Zero(s.y_.size())), gm_(Vector::Zero(s.y_.size())) {}

    void add(Scalar t, Scalar wf, Scalar wdf) {
      Eigen::Index k;
      Scalar u;
      spline_.locate(t, k, u);
      add_local(k, u, wf, wdf);
    }

    void add_local(Eigen::Index k, Scalar u, Scalar wf, Scalar wdf) {
      const Scalar h = spline_.h_;
      const Scalar v = Scalar(1) - u;
      const Scalar h2 = h * h / Scalar(6);
      gy_(k) += wf * v - wdf / h;
      gy_(k + 1) += wf * u + wdf / h;
      gm_(k) += wf * h2 * (v * v * v - v) + wdf * h / Scalar(6) * (Scalar(1) - Scalar(3) * v * v);
      gm_(k + 1) += wf * h2 * (u * u * u - u) + wdf * h / Scalar(6) * (Scalar(3) * u * u - Scalar(1));
    }

    /// Gradient with respect to every knot value, end knots included.
    Vector finish() const {
      Vector g = gy_;
      const Eigen::Index n = spline_.intervals();
      if (n >= 2) {
        Vector lam = gm_.segment(1, n - 1);
        solve_spline_system<Scalar>(lam);
        const Scalar c = Scalar(6) / (spline_.h_ * spline_.h_);
        for (Eigen::Index k = 1; k < n; ++k) {
          g(k - 1) += c * lam(k - 1);
          g(k) -= Scalar(2) * c * lam(k - 1);
          g(k + 1) += c * lam(k - 1);
        }
      }
      return g;
    }

   private:
    const UniformCubicSpline& spline_;
    Vector gy_;
    Vector gm_;
  };

 private:
  Scalar t0_ = Scalar(0);
  Scalar h_ = Scalar(1);
  Vector y_;
  Vector m_;
};

}  // namespace herglotz
