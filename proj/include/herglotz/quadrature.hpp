#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include <Eigen/Core>

namespace herglotz {

/// Simpson's rule on one panel from samples at its ends and midpoint.
template <typename Scalar>
Scalar simpson_panel(Scalar width, Scalar f0, Scalar fmid, Scalar f1) {
  return width / Scalar(6) * (f0 + Scalar(4) * fmid + f1);
}

/// Derivative of uniformly spaced samples at index k by a five-point
/// stencil. The stencil stays inside [lo, hi] when that window holds at least
/// five samples (central in the interior, one-sided near the ends); shorter
/// windows widen into [domain_lo, domain_hi], and tiny domains fall back to
/// three- or two-point formulas.
template <typename Scalar, typename Samples>
Scalar five_point_derivative(const Samples& f, int k, Scalar h, int lo, int hi, int domain_lo,
                             int domain_hi) {
  static constexpr std::array<std::array<int, 5>, 5> kFive = {{
      {-25, 48, -36, 16, -3},
      {-3, -10, 18, -6, 1},
      {1, -8, 0, 8, -1},
      {-1, 6, -18, 10, 3},
      {3, -16, 36, -48, 25},
  }};
  static constexpr std::array<std::array<int, 3>, 3> kThree = {{
      {-3, 4, -1},
      {-1, 0, 1},
      {1, -4, 3},
  }};

  if (hi - lo < 4) {
    lo = std::max(domain_lo, std::min(lo, k - 2));
    hi = std::min(domain_hi, std::max(hi, k + 2));
    if (hi - lo < 4) {
      const int need = 4 - (hi - lo);
      lo = std::max(domain_lo, lo - need);
      hi = std::min(domain_hi, lo + 4);
    }
  }
  const int width = hi - lo + 1;
  if (width >= 5) {
    const int s = std::clamp(k - 2, lo, hi - 4);
    const auto& c = kFive[k - s];
    Scalar acc = Scalar(0);
    for (int j = 0; j < 5; ++j) acc += Scalar(c[j]) * f(s + j);
    return acc / (Scalar(12) * h);
  }
  if (width >= 3) {
    const int s = std::clamp(k - 1, lo, hi - 2);
    const auto& c = kThree[k - s];
    Scalar acc = Scalar(0);
    for (int j = 0; j < 3; ++j) acc += Scalar(c[j]) * f(s + j);
    return acc / (Scalar(2) * h);
  }
  if (width == 2) return (f(hi) - f(lo)) / h;
  return Scalar(0);
}

/// Breakpoint-aligned composite Simpson: integrates f over consecutive
/// panels [knots[j], knots[j+1]]. Panel end samples are taken as one-sided
/// limits from inside the panel. Returns the running integral at each knot.
template <typename Scalar, typename Integrand>
std::vector<Scalar> cumulative_simpson(const std::vector<Scalar>& knots, const Integrand& f) {
  std::vector<Scalar> out(knots.size(), Scalar(0));
  for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
    const Scalar t0 = knots[j];
    const Scalar t1 = knots[j + 1];
    const Scalar tm = Scalar(0.5) * (t0 + t1);
    out[j + 1] = out[j] + simpson_panel(t1 - t0, f(t0, j, true), f(tm, j, true), f(t1, j, false));
  }
  return out;
}

}  // namespace herglotz
