#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "herglotz/integrate.hpp"
#include "herglotz/problem.hpp"
#include "herglotz/trajectory.hpp"

namespace herglotz {

struct SolveOptions {
  enum class Seed { linear, zero, explicit_values };

  int max_iters = 20000;
  double grad_tol = 1e-7;     // on the sup-norm of the free-node gradient
  double initial_step = 1.0;  // trial step before any curvature estimate
  double armijo_c = 1e-4;
  double shrink = 0.5;
  int max_backtracks = 60;
  Seed seed_guess = Seed::linear;
  // Either the n - 1 free values or all n + m + 1 node values.
  Eigen::VectorXd explicit_values;
};

struct SolveResult {
  Trajectory trajectory;
  Eigen::VectorXd free_values;
  double z_b = 0.0;
  int iterations = 0;
  double final_grad_norm = 0.0;
  bool converged = false;
  std::string message;
  std::vector<double> objective_history;  // z(b) after each accepted iterate
};

/// Exact gradient of z(b) with respect to the free node values of a sampled
/// trajectory, from the first variation along each spline cardinal function
/// (reverse sweep through the spline solve). Entry k belongs to node m + 1 + k.
/// The sign is flipped for maximization so that descent always applies.
Eigen::VectorXd variational_gradient(const HerglotzProblem& problem, const Trajectory& traj,
                                     const ZPath& path);

/// Central differences of z(b) under perturb(), same layout and sign.
Eigen::VectorXd fd_gradient(const HerglotzProblem& problem, const Trajectory& traj,
                            double eps = 1e-5);

/// Steepest descent on the free nodes with a Barzilai-Borwein trial step and
/// Armijo backtracking, so accepted objectives are monotone. Throws BadGuess
/// for an inadmissible seed and NonFinite if z(b) blows up.
SolveResult solve_direct(const HerglotzProblem& problem, const SolveOptions& options = {});

}  // namespace herglotz
