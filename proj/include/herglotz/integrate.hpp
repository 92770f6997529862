#pragma once

#include <vector>

#include <Eigen/Core>

#include "herglotz/problem.hpp"
#include "herglotz/trajectory.hpp"

namespace herglotz {

/// z(t) and the integrating factor lambda(t) = exp(-int_a^t d6 L) on [a, b].
///
/// Values are stored at integration knots (the grid nodes plus any junction
/// that is not a node) together with one-sided slopes, so that z_at and
/// lambda_at are C^1 cubic Hermite interpolants that respect junctions.
class ZPath {
 public:
  const Grid& grid() const { return grid_; }

  /// Node values on [a, b]; entry k belongs to grid node m + k.
  const Eigen::VectorXd& z() const { return z_nodes_; }
  const Eigen::VectorXd& lambda() const { return lambda_nodes_; }

  double z_end() const { return z_nodes_(z_nodes_.size() - 1); }

  /// Throws OutOfDomain outside [a, b].
  double z_at(double t) const;
  double lambda_at(double t) const;

  const std::vector<double>& knots() const { return knots_; }

 private:
  friend ZPath integrate_z(const HerglotzProblem& problem, const Trajectory& traj);

  double hermite(const Eigen::VectorXd& y, const Eigen::VectorXd& slope_right,
                 const Eigen::VectorXd& slope_left, double t) const;

  Grid grid_;
  std::vector<double> knots_;
  Eigen::VectorXd z_, log_lambda_;
  Eigen::VectorXd dz_right_, dz_left_, dlog_right_, dlog_left_;
  Eigen::VectorXd z_nodes_, lambda_nodes_;
};

/// Grid nodes on [a, b] plus every time where the integrand may have a
/// kink: trajectory junctions shifted by 0 and +-tau, and the seam b - tau.
std::vector<double> integration_knots(const Trajectory& traj);

/// Classic RK4 for z' = L and (log lambda)' = -d6 L from knot to knot, so no
/// stage straddles a junction. Throws NonFinite or propagates DomainError.
ZPath integrate_z(const HerglotzProblem& problem, const Trajectory& traj);

double lambda_at(const ZPath& path, double t);

/// Everything the condition checks need at one time.
struct PointData {
  double t = 0.0;
  TrajectoryState now;  // x(t)
  TrajectoryState lag;  // x(t - tau)
  double z = 0.0;
  double lambda = 1.0;
  Jet L;                 // value and d1 L .. d6 L (grad entries 0..5)
};

PointData point_data(const HerglotzProblem& problem, const Trajectory& traj, const ZPath& path,
                     double t, Side side = Side::right);

/// Coefficients of eta and eta' in the first-variation integrand after the
/// shift s = t + tau moves the delayed terms onto their own arguments.
struct VariationWeights {
  double eta = 0.0;
  double deta = 0.0;
};

VariationWeights variation_weights(const HerglotzProblem& problem, const Trajectory& traj,
                                   const ZPath& path, double s, Side side, bool delayed_active);

/// zeta(b), the derivative of z(b) along eta:
///   zeta(b) = (1 / lambda(b)) int_a^b lambda(s)[d2L eta + d3L eta' + d4L eta(s-tau) + d5L eta'(s-tau)] ds
/// by composite Simpson over the integration knots.
double first_variation(const HerglotzProblem& problem, const Trajectory& traj, const ZPath& path,
                       const VariationDirection& eta);

}  // namespace herglotz
