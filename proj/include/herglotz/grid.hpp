#pragma once

#include <optional>

namespace herglotz {

/// Uniform grid on [a - tau, b] with the delay an exact multiple of the step:
/// nodes t_i = a + (i - m) h for i = 0 .. n + m, so t_m = a and t_{n+m} = b.
struct Grid {
  double a = 0.0;
  double b = 1.0;
  double tau = 0.0;
  int n = 2;    // intervals on [a, b]
  double h = 0.5;
  int m = 0;    // tau / h

  int node_count() const { return n + m + 1; }
  int first_index() const { return m; }       // node at a
  int last_index() const { return n + m; }    // node at b
  int seam_index() const { return n; }        // node at b - tau

  double node(int i) const {
    if (i == n + m) return b;
    if (i == m) return a;
    return a + static_cast<double>(i - m) * h;
  }
  double start() const { return node(0); }
  double seam() const { return node(n); }

  /// Free decision nodes a < t_i < b.
  bool is_free(int i) const { return i > m && i < n + m; }

  /// Index of the node coinciding with t to within 1e-9 h.
  std::optional<int> node_index(double t) const;

  /// Index i with t in [t_i, t_{i+1}], clamped to the grid.
  int interval_index(double t) const;
};

/// Throws BadInterval unless a < b, 0 <= tau < b - a and n >= 2; throws
/// DelayNotAligned unless tau / h is an integer to 1e-12 relative.
Grid build_grid(double a, double b, double tau, int n);

}  // namespace herglotz
