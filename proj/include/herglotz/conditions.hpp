#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "herglotz/integrate.hpp"
#include "herglotz/problem.hpp"
#include "herglotz/symmetry.hpp"
#include "herglotz/trajectory.hpp"

namespace herglotz {

struct ExcludedZone {
  double from = 0.0;
  double to = 0.0;
};

/// A sampled residual profile with its sup-norm over the samples that lie
/// outside every excluded zone.
struct ResidualReport {
  std::string label;
  std::vector<double> t;
  std::vector<double> residual;
  std::vector<bool> excluded;
  std::vector<ExcludedZone> excluded_zones;
  double sup_norm = 0.0;
  double sup_at = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

/// Builds a report; samples within `radius` of a junction are excluded,
/// except for a junction at the first sample.
ResidualReport make_residual_report(std::string label, std::vector<double> t,
                                    std::vector<double> residual,
                                    const std::vector<double>& junctions, double radius,
                                    double tolerance);

/// Times where classical derivatives of the coefficient functions may fail:
/// trajectory junctions shifted by 0 and +-tau, plus the seam b - tau when
/// tau > 0.
std::vector<double> junction_times(const Trajectory& traj);

/// Exclusion radius used by every report: two grid steps.
inline double exclusion_radius(const Grid& g) { return 2.0 * g.h; }

/// Residuals of the delayed generalized Euler-Lagrange system (left-hand
/// sides; the right-hand sides are zero):
///   EL-1 on [a, b - tau]:
///     lambda(t+tau)[d4L(t+tau) - d/dt d5L(t+tau) + d5L(t+tau) d6L(t+tau)]
///       + lambda(t)[d2L(t) - d/dt d3L(t) + d3L(t) d6L(t)]
///   EL-2 on [b - tau, b]: d2L - d/dt d3L + d3L d6L
/// Time derivatives are five-point differences at the grid step, one-sided
/// at the interval ends.
std::pair<ResidualReport, ResidualReport> el_residuals(const HerglotzProblem& problem,
                                                       const Trajectory& traj, const ZPath& path,
                                                       double tolerance);

/// DuBois-Reymond residuals (left minus right):
///   DBR-1 on [a, b - tau]: d/dt{lambda L - x'[lambda d3L + lambda(t+tau) d5L(t+tau)]} - lambda d1L
///   DBR-2 on [b - tau, b]: d/dt{lambda [L - x' d3L]} - lambda d1L
std::pair<ResidualReport, ResidualReport> dbr_residuals(const HerglotzProblem& problem,
                                                        const Trajectory& traj, const ZPath& path,
                                                        double tolerance);

struct HypothesisReports {
  ResidualReport extremal;               // H1 on [a - tau, b - tau]
  std::optional<ResidualReport> noether; // H2 on [a, b - tau], with a group only
};

/// H1(t) = d4L(t+tau) x'(t) + d5L(t+tau) x''(t);
/// H2(t) = d4L(t+tau) xi(t) + d5L(t+tau) (xi'(t) - x'(t) sigma'(t)).
HypothesisReports hypothesis_profiles(const HerglotzProblem& problem, const Trajectory& traj,
                                      const ZPath& path, const SymmetryGroup* group,
                                      double tolerance);

/// Point data at every grid node of [a, b]; entry k is node m + k.
std::vector<PointData> sample_points(const HerglotzProblem& problem, const Trajectory& traj,
                                     const ZPath& path);

}  // namespace herglotz
