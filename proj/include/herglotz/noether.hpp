#pragma once

#include <optional>
#include <string>
#include <vector>

#include "herglotz/conditions.hpp"
#include "herglotz/integrate.hpp"
#include "herglotz/problem.hpp"
#include "herglotz/symmetry.hpp"

namespace herglotz {

/// Defect of the invariance condition along the trajectory,
///   h(t) = (1 / lambda(t)) int_a^t lambda [d1L sigma + d2L xi + d3L (xi' - x' sigma')
///            + d4L xi(s-tau) + d5L (xi'(s-tau) - x'(s-tau) sigma'(s-tau)) + L sigma'] ds,
/// so h solves h' = d6L h + (bracket) with h(a) = 0. Delayed generator terms
/// vanish while s - tau < a. Reported at the grid nodes of [a, b].
ResidualReport group_variation(const HerglotzProblem& problem, const Trajectory& traj,
                               const ZPath& path, const SymmetryGroup& group, double tolerance);

/// One conserved-quantity profile and its spread about the mean.
struct QuantityProfile {
  std::string label;
  std::vector<double> t;
  std::vector<double> q;
  std::vector<bool> excluded;
  std::vector<ExcludedZone> excluded_zones;
  double mean = 0.0;
  double drift = 0.0;  // max |q - mean| over the kept samples
  double tolerance = 0.0;
  bool pass = true;
};

struct ConservationReport {
  std::vector<QuantityProfile> profiles;  // Q1 and Q2, or a single one when tau = 0
  bool pass = true;
};

/// Q1 on [a, b - tau]:
///   [lambda d3L + lambda(t+tau) d5L(t+tau)] xi
///     + [lambda L - x' (lambda d3L + lambda(t+tau) d5L(t+tau))] sigma
/// Q2 on [b - tau, b]: lambda [d3L xi + (L - x' d3L) sigma].
/// With tau = 0 the Q1 form (total partials) is reported over [a, b].
ConservationReport conserved_quantities(const HerglotzProblem& problem, const Trajectory& traj,
                                        const ZPath& path, const SymmetryGroup& group,
                                        double tolerance);

struct NoetherTolerances {
  double el = 1e-6;
  double hypothesis = 1e-6;
  double invariance = 1e-6;
  double drift = 1e-6;

  NoetherTolerances() = default;
  explicit NoetherTolerances(double all) : el(all), hypothesis(all), invariance(all), drift(all) {}
};

struct NoetherVerdict {
  bool pass = false;
  std::string failed_premise;  // empty when pass
  ResidualReport el1, el2, h1, h2, invariance;
  ConservationReport conservation;
};

/// Checks the premises in order (EL residual, hypothesis H1, hypothesis H2,
/// invariance) and then the conclusion (conservation). The first failure is
/// named in `failed_premise`.
NoetherVerdict check_noether(const HerglotzProblem& problem, const Trajectory& traj,
                             const ZPath& path, const SymmetryGroup& group,
                             const NoetherTolerances& tol);

}  // namespace herglotz
