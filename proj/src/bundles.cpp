#include "herglotz/bundles.hpp"

#include <cmath>

#include "herglotz/errors.hpp"

namespace herglotz {

namespace {

using nlohmann::ordered_json;

ProblemConfig base(double a, double b, double tau, int n, double gamma, double beta,
                   std::string history, std::string lagrangian) {
  ProblemConfig c;
  c.a = a;
  c.b = b;
  c.tau = tau;
  c.n = n;
  c.gamma = gamma;
  c.beta = beta;
  c.history = std::move(history);
  c.lagrangian = std::move(lagrangian);
  return c;
}

TrajectoryConfig pieces(std::vector<PieceConfig> p) {
  TrajectoryConfig t;
  t.backend = TrajectoryConfig::Backend::pieces;
  t.pieces = std::move(p);
  return t;
}

// x = 0 on [0, 1] joined C^2 to x(2) = 1 by the quintic smoothstep.
const char* kSmoothstep = "10*(t-1)^3 - 15*(t-1)^4 + 6*(t-1)^5";

BundledProblem reference() {
  BundledProblem b;
  b.name = "paper-s4";
  b.description = "L = x'(t-1)^2 + z on [0, 2], history -t, x(2) = 1";
  b.config = base(0.0, 2.0, 1.0, 2000, 0.0, 1.0, "-t", "dxtau^2 + z");
  b.config.trajectory = pieces({{-1.0, 0.0, "-t"}, {0.0, 1.0, "0"}, {1.0, 2.0, kSmoothstep}});
  b.config.group = GroupConfig{"1", "0"};
  b.config.tolerance = 1e-6;
  const double e = std::exp(1.0);
  b.expected = {{"z_at_1", e - 1.0},
                {"z_b", e * e - e},
                {"lambda", "exp(-t)"},
                {"Q1_mean", 1.0},
                {"Q2_mean", 1.0 - 1.0 / e}};
  return b;
}

BundledProblem reference_nonextremal() {
  BundledProblem b;
  b.name = "paper-s4-nonextremal";
  b.description = "paper-s4 Lagrangian along x = t on [0, 1], which is not an extremal";
  b.config = base(0.0, 2.0, 1.0, 2000, 0.0, 1.0, "-t", "dxtau^2 + z");
  b.config.trajectory = pieces({{-1.0, 0.0, "-t"}, {0.0, 1.0, "t"}, {1.0, 2.0, "1"}});
  b.config.group = GroupConfig{"1", "0"};
  b.config.tolerance = 1e-6;
  b.expected = {{"el1_at_0", 2.0 * std::exp(-1.0)}, {"check_el_exit", 1}};
  return b;
}

BundledProblem damped() {
  const double omega = std::sqrt(0.99);
  const char* x = "exp(-0.1*t)*cos(sqrt(0.99)*t)";
  BundledProblem b;
  b.name = "herglotz-damped";
  b.description = "L = x'^2/2 - x^2/2 - 0.2 z without delay; extremals solve x'' + 0.2 x' + x = 0";
  b.config = base(0.0, 2.0, 0.0, 2000, 0.0, std::exp(-0.2) * std::cos(2.0 * omega), x,
                  "dx^2/2 - x^2/2 - 0.2*z");
  b.config.trajectory = pieces({{0.0, 2.0, x}});
  b.config.tolerance = 1e-4;
  b.expected = {{"el_residual_max", 1e-4}};
  return b;
}

BundledProblem line() {
  BundledProblem b;
  b.name = "classical-line";
  b.description = "L = x'^2 on [0, 1] without delay; the extremal is x = t";
  b.config = base(0.0, 1.0, 0.0, 100, 0.0, 1.0, "0", "dx^2");
  b.config.trajectory = pieces({{0.0, 1.0, "t"}});
  b.config.group = GroupConfig{"1", "0"};
  b.config.tolerance = 1e-8;
  b.config.solver.seed_guess = SolveOptions::Seed::zero;
  b.expected = {{"z_b", 1.0}, {"Q_mean", -1.0}};
  return b;
}

BundledProblem z_free_delay() {
  BundledProblem b;
  b.name = "delay-z-free";
  b.description = "L = x'^2 + x'(t-1)^2 on [0, 2] with zero history; L does not depend on z";
  b.config = base(0.0, 2.0, 1.0, 2000, 0.0, 1.0, "0", "dx^2 + dxtau^2");
  // Slopes 1/3 and 2/3: the natural condition at t = 1 is 2 x'(1-) = x'(1+).
  b.config.trajectory = pieces({{-1.0, 0.0, "0"}, {0.0, 1.0, "t/3"}, {1.0, 2.0, "1/3 + 2*(t-1)/3"}});
  b.config.tolerance = 1e-8;
  b.expected = {{"z_b", 2.0 / 3.0}, {"lambda", "1"}};
  return b;
}

}  // namespace

const std::vector<BundledProblem>& bundled_problems() {
  static const std::vector<BundledProblem> all = {reference(), reference_nonextremal(), damped(), line(),
                                                  z_free_delay()};
  return all;
}

const BundledProblem& find_bundle(std::string_view name) {
  for (const auto& b : bundled_problems())
    if (b.name == name) return b;
  std::string known;
  for (const auto& b : bundled_problems()) known += (known.empty() ? "" : ", ") + b.name;
  throw Error(ErrorKind::Config, "unknown bundle \"" + std::string(name) + "\" (known: " + known + ")");
}

}  // namespace herglotz
