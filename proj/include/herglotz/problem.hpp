#pragma once

#include <Eigen/Core>

#include "herglotz/expr.hpp"
#include "herglotz/grid.hpp"
#include "herglotz/trajectory.hpp"

namespace herglotz {

enum class Sense { minimize, maximize };

/// z(b) -> extr subject to z' = L(t, x, x', x(t - tau), x'(t - tau), z),
/// z(a) = gamma, x = history on [a - tau, a], x(b) = beta.
struct HerglotzProblem {
  Grid grid;
  double gamma = 0.0;
  double beta = 0.0;
  Expression history;     // in t
  Expression lagrangian;  // in t, x, dx, xtau, dxtau, z
  Sense sense = Sense::minimize;
};

/// Checks the variable usage of the expressions and finiteness of the
/// scalars; throws Config on violation.
void validate(const HerglotzProblem& problem);

/// Index of each Lagrangian slot in a Jet gradient: d1 L ... d6 L.
enum Slot : int { kT = 0, kX = 1, kDx = 2, kXtau = 3, kDxtau = 4, kZ = 5 };

/// Full node vector for a sampled admissible trajectory: history values on
/// [a - tau, a], `free_values` on the interior nodes, beta at b.
Eigen::VectorXd admissible_nodes(const HerglotzProblem& problem, const Eigen::VectorXd& free_values);

/// Straight line from history(a) to beta on the free nodes.
Eigen::VectorXd linear_free_values(const HerglotzProblem& problem);

Trajectory admissible_trajectory(const HerglotzProblem& problem, const Eigen::VectorXd& free_values);

/// Bindings for [x, z]_tau(t) with trajectory limits taken from `side`.
Bindings lagrangian_arguments(const Trajectory& traj, double t, double z, Side side);

}  // namespace herglotz
