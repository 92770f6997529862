#pragma once

#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "herglotz/expr.hpp"
#include "herglotz/grid.hpp"
#include "herglotz/spline.hpp"

namespace herglotz {

/// Which one-sided limit to take at a junction. Evaluation defaults to the
/// right limit; integrators ask for the left limit at the end of a step.
enum class Side { right, left };

struct TrajectoryState {
  double x = 0.0;
  double dx = 0.0;
  double ddx = 0.0;
};

/// An admissible variation: zero on [a - tau, a] and at b, interpolating
/// its node values on [a, b] either with the natural cubic spline used for
/// sampled trajectories or piecewise linearly (hat functions).
class VariationDirection {
 public:
  enum class Basis { spline, hat };

  /// `values` holds one entry per grid node on [a, b] (n + 1 entries); the
  /// end entries must be zero.
  VariationDirection(const Grid& grid, Eigen::VectorXd values, Basis basis);

  /// Unit direction at grid node `node_index` (must be a free node).
  static VariationDirection unit(const Grid& grid, int node_index, Basis basis);

  TrajectoryState eval(double t, Side side = Side::right) const;

  const Grid& grid() const { return grid_; }
  Basis basis() const { return basis_; }
  const Eigen::VectorXd& values() const { return values_; }

  VariationDirection scaled(double factor) const;

 private:
  Grid grid_;
  Eigen::VectorXd values_;
  Basis basis_;
  UniformCubicSpline<double> spline_;
};

/// One analytic piece of a trajectory: x(t) = expr(t) on [from, to].
struct Piece {
  double from = 0.0;
  double to = 0.0;
  Expression expr;
};

/// Candidate trajectory on [a - tau, b]. Immutable; copies share data.
class Trajectory {
 public:
  /// Natural cubic splines through `node_values` (one per grid node), split
  /// into independent segments at `breakpoint_nodes`. The default split is
  /// at a when tau > 0, so the history segment never moves with free nodes.
  static Trajectory sampled(const Grid& grid, Eigen::VectorXd node_values);
  static Trajectory sampled(const Grid& grid, Eigen::VectorXd node_values,
                            std::vector<int> breakpoint_nodes);

  /// Pieces must be ordered, contiguous, cover [a - tau, b] and join
  /// continuously to 1e-9; expressions may only use t.
  static Trajectory piecewise(const Grid& grid, std::vector<Piece> pieces);

  /// Throws OutOfDomain outside [a - tau, b].
  TrajectoryState eval(double t, Side side = Side::right) const;

  const Grid& grid() const { return grid_; }
  bool is_sampled() const { return !pieces_; }

  /// Interior junction times where derivatives may jump.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  /// Stored node values (sampled only).
  const Eigen::VectorXd& node_values() const;
  const std::vector<int>& breakpoint_nodes() const { return breakpoint_nodes_; }

  /// x at every grid node, for either backend.
  Eigen::VectorXd sample_nodes() const;

  /// Returns x + eps * eta as a new trajectory.
  Trajectory plus(const VariationDirection& eta, double eps) const;

  /// Spline segments over node ranges [first_node, last_node] (sampled only).
  struct SplineSegment {
    int first_node;
    int last_node;
    UniformCubicSpline<double> spline;
  };
  const std::vector<SplineSegment>& segments() const;
  bool has_offsets() const { return !offsets_.empty(); }

 private:
  struct Offset {
    VariationDirection eta;
    double eps;
  };

  TrajectoryState eval_pieces(double t, Side side) const;
  TrajectoryState eval_splines(double t, Side side) const;

  Grid grid_;
  std::shared_ptr<const Eigen::VectorXd> values_;
  std::vector<int> breakpoint_nodes_;
  std::shared_ptr<const std::vector<SplineSegment>> segments_;
  std::shared_ptr<const std::vector<Piece>> pieces_;
  std::vector<double> breakpoints_;
  std::vector<Offset> offsets_;
};

/// Returns a copy with x_i += delta at free node i; throws FixedNode for
/// history nodes (t_i <= a) and the endpoint b.
Trajectory perturb(const Trajectory& traj, int node_index, double delta);

}  // namespace herglotz
