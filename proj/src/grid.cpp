#include "herglotz/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "herglotz/errors.hpp"

namespace herglotz {

Grid build_grid(double a, double b, double tau, int n) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(tau) || !(a < b)) {
    throw Error(ErrorKind::BadInterval, "interval requires finite a < b");
  }
  if (!(tau >= 0.0) || !(tau < b - a)) {
    throw Error(ErrorKind::BadInterval, "delay requires 0 <= tau < b - a");
  }
  if (n < 2) throw Error(ErrorKind::BadInterval, "grid requires n >= 2 intervals");

  Grid g;
  g.a = a;
  g.b = b;
  g.tau = tau;
  g.n = n;
  g.h = (b - a) / n;
  const double ratio = tau / g.h;
  const double m = std::round(ratio);
  if (std::abs(ratio - m) > 1e-12 * std::max(1.0, ratio)) {
    std::ostringstream os;
    os << "tau/h = " << ratio << " is not an integer (tau = " << tau << ", h = " << g.h << ")";
    throw Error(ErrorKind::DelayNotAligned, os.str());
  }
  g.m = static_cast<int>(m);
  return g;
}

std::optional<int> Grid::node_index(double t) const {
  const double s = (t - a) / h + m;
  const double i = std::round(s);
  if (i < 0 || i > n + m) return std::nullopt;
  if (std::abs(t - node(static_cast<int>(i))) > 1e-9 * h) return std::nullopt;
  return static_cast<int>(i);
}

int Grid::interval_index(double t) const {
  if (auto i = node_index(t)) return std::min(*i, n + m - 1);
  const int i = static_cast<int>(std::floor((t - a) / h)) + m;
  return std::clamp(i, 0, n + m - 1);
}

}  // namespace herglotz
