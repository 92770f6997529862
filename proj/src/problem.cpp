#include "herglotz/problem.hpp"

#include <cmath>

#include "herglotz/errors.hpp"

namespace herglotz {

void validate(const HerglotzProblem& problem) {
  if (!std::isfinite(problem.gamma) || !std::isfinite(problem.beta)) {
    throw Error(ErrorKind::Config, "gamma and beta must be finite");
  }
  VariableSet history_vars;
  history_vars.set(static_cast<int>(Variable::t));
  if ((problem.history.variables() & ~history_vars).any()) {
    throw Error(ErrorKind::Config, "history may only depend on t");
  }
  if (problem.lagrangian.uses(Variable::eps)) {
    throw Error(ErrorKind::Config, "'eps' is reserved and may not appear in the Lagrangian");
  }
}

Eigen::VectorXd admissible_nodes(const HerglotzProblem& problem, const Eigen::VectorXd& free_values) {
  const Grid& g = problem.grid;
  if (free_values.size() != g.n - 1) {
    throw Error(ErrorKind::BadGuess, "expected " + std::to_string(g.n - 1) + " free node values");
  }
  Eigen::VectorXd x(g.node_count());
  for (int i = 0; i <= g.m; ++i) x(i) = eval(problem.history, Bindings{{Variable::t, g.node(i)}});
  x.segment(g.m + 1, g.n - 1) = free_values;
  x(g.last_index()) = problem.beta;
  return x;
}

Eigen::VectorXd linear_free_values(const HerglotzProblem& problem) {
  const Grid& g = problem.grid;
  const double xa = eval(problem.history, Bindings{{Variable::t, g.a}});
  Eigen::VectorXd v(g.n - 1);
  for (int k = 1; k < g.n; ++k) v(k - 1) = xa + (problem.beta - xa) * k / g.n;
  return v;
}

Trajectory admissible_trajectory(const HerglotzProblem& problem, const Eigen::VectorXd& free_values) {
  return Trajectory::sampled(problem.grid, admissible_nodes(problem, free_values));
}

Bindings lagrangian_arguments(const Trajectory& traj, double t, double z, Side side) {
  const double tau = traj.grid().tau;
  const TrajectoryState now = traj.eval(t, side);
  const TrajectoryState lag = tau == 0.0 ? now : traj.eval(t - tau, side);
  Bindings b;
  b.set(Variable::t, t)
      .set(Variable::x, now.x)
      .set(Variable::dx, now.dx)
      .set(Variable::xtau, lag.x)
      .set(Variable::dxtau, lag.dx)
      .set(Variable::z, z);
  return b;
}

}  // namespace herglotz
