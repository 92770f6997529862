#pragma once

#include "herglotz/expr.hpp"
#include "herglotz/trajectory.hpp"

namespace herglotz {

/// Infinitesimal generators of t -> t + eps sigma(t, x), x -> x + eps xi(t, x).
struct SymmetryGroup {
  Expression sigma;
  Expression xi;
};

/// Generators along a trajectory, with total time derivatives by the chain
/// rule: sigma' = d_t sigma + d_x sigma * x'.
struct GeneratorValues {
  double sigma = 0.0;
  double dsigma = 0.0;
  double xi = 0.0;
  double dxi = 0.0;
};

/// Throws Config if a generator uses variables other than t and x.
void validate(const SymmetryGroup& group);

GeneratorValues evaluate_generators(const SymmetryGroup& group, double t, const TrajectoryState& state);

}  // namespace herglotz
