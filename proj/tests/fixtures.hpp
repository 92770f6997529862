#pragma once

#include <cmath>
#include <tuple>
#include <vector>

#include "herglotz/expr.hpp"
#include "herglotz/grid.hpp"
#include "herglotz/integrate.hpp"
#include "herglotz/problem.hpp"
#include "herglotz/trajectory.hpp"

namespace fixtures {

using namespace herglotz;

inline HerglotzProblem problem(double a, double b, double tau, int n, double gamma, double beta,
                               const char* history, const char* lagrangian) {
  HerglotzProblem p;
  p.grid = build_grid(a, b, tau, n);
  p.gamma = gamma;
  p.beta = beta;
  p.history = parse(history);
  p.lagrangian = parse(lagrangian);
  return p;
}

inline HerglotzProblem reference(int n) { return problem(0, 2, 1, n, 0, 1, "-t", "dxtau^2 + z"); }

inline Trajectory pieces(const Grid& g, std::vector<std::tuple<double, double, const char*>> ps) {
  std::vector<Piece> out;
  for (auto [from, to, e] : ps) out.push_back({from, to, parse(e)});
  return Trajectory::piecewise(g, std::move(out));
}

inline const char* kSmoothstep = "10*(t-1)^3 - 15*(t-1)^4 + 6*(t-1)^5";

// x_phi: -t on [-1, 0], 0 on [0, 1], smoothstep up to 1 on [1, 2].
inline Trajectory reference_extremal(const Grid& g) {
  return pieces(g, {{-1, 0, "-t"}, {0, 1, "0"}, {1, 2, kSmoothstep}});
}

// x = t on [0, 1]: not an extremal of the reference problem.
inline Trajectory reference_nonextremal(const Grid& g) {
  return pieces(g, {{-1, 0, "-t"}, {0, 1, "t"}, {1, 2, "1"}});
}

inline Eigen::VectorXd sample(const Grid& g, double (*f)(double)) {
  Eigen::VectorXd v(g.node_count());
  for (int i = 0; i < g.node_count(); ++i) v(i) = f(g.node(i));
  return v;
}

}  // namespace fixtures
