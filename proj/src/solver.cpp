#include "herglotz/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "herglotz/errors.hpp"

namespace herglotz {

namespace {

double sign_of(const HerglotzProblem& problem) {
  return problem.sense == Sense::maximize ? -1.0 : 1.0;
}

}  // namespace

Eigen::VectorXd variational_gradient(const HerglotzProblem& problem, const Trajectory& traj,
                                     const ZPath& path) {
  const Grid& g = traj.grid();
  if (!traj.is_sampled() || traj.has_offsets())
    throw Error(ErrorKind::Config, "variational gradient needs a plain sampled trajectory");
  const auto& nodes_bp = traj.breakpoint_nodes();
  if (g.m > 0 && std::find(nodes_bp.begin(), nodes_bp.end(), g.m) == nodes_bp.end())
    throw Error(ErrorKind::Config, "variational gradient needs the spline split at a");

  const double seam = g.seam();
  Eigen::VectorXd full = Eigen::VectorXd::Zero(g.node_count());
  for (const auto& seg : traj.segments()) {
    if (seg.last_node <= g.m) continue;  // history
    UniformCubicSpline<double>::Adjoint adj(seg.spline);
    for (int i = seg.first_node; i < seg.last_node; ++i) {
      const double t0 = g.node(i);
      const double t1 = g.node(i + 1);
      const double w = t1 - t0;
      const bool delayed = t1 <= seam + 1e-12 * g.h;
      const Eigen::Index k = i - seg.first_node;
      const double us[3] = {0.0, 0.5, 1.0};
      const double qs[3] = {w / 6.0, 4.0 * w / 6.0, w / 6.0};
      for (int s = 0; s < 3; ++s) {
        const Side side = s == 2 ? Side::left : Side::right;
        const VariationWeights vw =
            variation_weights(problem, traj, path, t0 + us[s] * w, side, delayed);
        adj.add_local(k, us[s], qs[s] * vw.eta, qs[s] * vw.deta);
      }
    }
    full.segment(seg.first_node, seg.last_node - seg.first_node + 1) += adj.finish();
  }
  const double lb = path.lambda()(g.n);
  return sign_of(problem) * full.segment(g.m + 1, g.n - 1) / lb;
}

Eigen::VectorXd fd_gradient(const HerglotzProblem& problem, const Trajectory& traj, double eps) {
  const Grid& g = traj.grid();
  Eigen::VectorXd out(g.n - 1);
  for (int k = 0; k < g.n - 1; ++k) {
    const int i = g.m + 1 + k;
    const double up = integrate_z(problem, perturb(traj, i, eps)).z_end();
    const double down = integrate_z(problem, perturb(traj, i, -eps)).z_end();
    out(k) = (up - down) / (2.0 * eps);
  }
  return sign_of(problem) * out;
}

namespace {

Eigen::VectorXd seed_values(const HerglotzProblem& problem, const SolveOptions& o) {
  const Grid& g = problem.grid;
  switch (o.seed_guess) {
    case SolveOptions::Seed::linear:
      return linear_free_values(problem);
    case SolveOptions::Seed::zero:
      return Eigen::VectorXd::Zero(g.n - 1);
    case SolveOptions::Seed::explicit_values:
      break;
  }
  const Eigen::VectorXd& v = o.explicit_values;
  if (v.size() == g.n - 1) return v;
  if (v.size() != g.node_count()) {
    std::ostringstream os;
    os << "initial guess has " << v.size() << " values; expected " << g.n - 1 << " free or "
       << g.node_count() << " node values";
    throw Error(ErrorKind::BadGuess, os.str());
  }
  const Eigen::VectorXd fixed = admissible_nodes(problem, Eigen::VectorXd::Zero(g.n - 1));
  for (int i = 0; i < g.node_count(); ++i) {
    if (g.is_free(i)) continue;
    if (std::abs(v(i) - fixed(i)) > 1e-12 * std::max(1.0, std::abs(fixed(i)))) {
      std::ostringstream os;
      os << "initial guess violates the fixed node at t = " << g.node(i) << " (" << v(i)
         << " vs " << fixed(i) << ")";
      throw Error(ErrorKind::BadGuess, os.str());
    }
  }
  return v.segment(g.m + 1, g.n - 1);
}

struct Evaluation {
  Trajectory traj;
  double z_b;
  double objective;
};

Evaluation evaluate(const HerglotzProblem& problem, const Eigen::VectorXd& y, ZPath* path_out) {
  Trajectory traj = admissible_trajectory(problem, y);
  ZPath path = integrate_z(problem, traj);
  const double zb = path.z_end();
  if (!std::isfinite(zb)) throw Error(ErrorKind::NonFinite, "z(b) is not finite");
  if (path_out) *path_out = path;
  return {traj, zb, sign_of(problem) * zb};
}

}  // namespace

SolveResult solve_direct(const HerglotzProblem& problem, const SolveOptions& options) {
  validate(problem);
  Eigen::VectorXd y = seed_values(problem, options);

  ZPath path;
  Evaluation cur = evaluate(problem, y, &path);
  Eigen::VectorXd grad = variational_gradient(problem, cur.traj, path);

  SolveResult r{cur.traj, y, cur.z_b, 0, grad.lpNorm<Eigen::Infinity>(), false, {}, {cur.z_b}};
  Eigen::VectorXd prev_y, prev_grad;
  double step = options.initial_step;

  for (int it = 0; it < options.max_iters; ++it) {
    r.final_grad_norm = grad.lpNorm<Eigen::Infinity>();
    if (r.final_grad_norm <= options.grad_tol) {
      r.converged = true;
      break;
    }
    if (it > 0) {
      const Eigen::VectorXd s = y - prev_y;
      const Eigen::VectorXd d = grad - prev_grad;
      const double sd = s.dot(d);
      step = sd > 0.0 ? s.squaredNorm() / sd : options.initial_step;
    }

    const double g2 = grad.squaredNorm();
    bool accepted = false;
    Eigen::VectorXd trial;
    Evaluation next = cur;
    ZPath next_path;
    for (int k = 0; k <= options.max_backtracks; ++k) {
      trial = y - step * grad;
      try {
        next = evaluate(problem, trial, &next_path);
      } catch (const Error& e) {
        // An overlong step can push the trajectory out of the Lagrangian's
        // domain; treat it like a failed sufficient-decrease test.
        if (e.kind() != ErrorKind::Domain && e.kind() != ErrorKind::NonFinite &&
            e.kind() != ErrorKind::NonDifferentiable)
          throw;
        step *= options.shrink;
        continue;
      }
      if (next.objective <= cur.objective - options.armijo_c * step * g2) {
        accepted = true;
        break;
      }
      step *= options.shrink;
    }
    if (!accepted) {
      r.message = "line search failed to decrease the objective";
      break;
    }

    prev_y = y;
    prev_grad = grad;
    y = trial;
    cur = next;
    path = next_path;
    grad = variational_gradient(problem, cur.traj, path);
    r.iterations = it + 1;
    r.objective_history.push_back(cur.z_b);
  }

  r.trajectory = cur.traj;
  r.free_values = y;
  r.z_b = cur.z_b;
  r.final_grad_norm = grad.lpNorm<Eigen::Infinity>();
  if (r.final_grad_norm <= options.grad_tol) r.converged = true;
  if (r.converged) {
    r.message = "converged";
  } else if (r.message.empty()) {
    r.message = "iteration limit reached";
  }
  return r;
}

}  // namespace herglotz
