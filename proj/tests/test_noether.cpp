#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "herglotz/noether.hpp"

using namespace herglotz;
using namespace fixtures;

namespace {

const double e = std::exp(1.0);

SymmetryGroup group(const char* sigma, const char* xi) { return {parse(sigma), parse(xi)}; }

}  // namespace

TEST_CASE("invariance defect of the reference problem under time translation") {
  const HerglotzProblem p = reference(2000);
  const Trajectory x = reference_extremal(p.grid);
  const ZPath z = integrate_z(p, x);
  const ResidualReport h = group_variation(p, x, z, group("1", "0"), 1e-8);
  CHECK(h.residual.front() == 0.0);
  CHECK(h.t.front() == 0.0);
  CHECK(h.t.back() == 2.0);
  CHECK(h.sup_norm <= 1e-8);
  CHECK(h.pass);

  const ResidualReport zero = group_variation(p, x, z, group("0", "0"), 1e-8);
  for (double v : zero.residual) CHECK(v == 0.0);
}

TEST_CASE("invariance defect for the non-autonomous L = t + z") {
  const HerglotzProblem p = problem(0.5, 2.5, 0, 400, 0, 1, "0", "t + z");
  const Trajectory x = pieces(p.grid, {{0.5, 2.5, "sin(t)"}});
  const ZPath z = integrate_z(p, x);
  const ResidualReport h = group_variation(p, x, z, group("1", "0"), 1e-6);
  CHECK(h.residual.front() == 0.0);
  for (std::size_t k = 0; k < h.t.size(); ++k)
    REQUIRE(std::abs(h.residual[k] - (std::exp(h.t[k] - 0.5) - 1)) <= 1e-6);
  CHECK_FALSE(h.pass);
}

TEST_CASE("conserved quantities of the reference extremal") {
  const HerglotzProblem p = reference(2000);
  const Trajectory x = reference_extremal(p.grid);
  const ZPath z = integrate_z(p, x);
  const ConservationReport q = conserved_quantities(p, x, z, group("1", "0"), 1e-6);
  REQUIRE(q.profiles.size() == 2);
  CHECK(q.profiles[0].label == "Q1 on [a,b-tau]");
  CHECK(std::abs(q.profiles[0].mean - 1) <= 1e-6);
  CHECK(q.profiles[0].drift < 1e-6);
  CHECK(std::abs(q.profiles[1].mean - (1 - 1 / e)) <= 1e-6);
  CHECK(q.profiles[1].drift < 1e-6);
  CHECK(q.pass);

  const ConservationReport zero = conserved_quantities(p, x, z, group("0", "0"), 1e-6);
  for (const auto& prof : zero.profiles)
    for (double v : prof.q) CHECK(v == 0.0);
  CHECK(zero.pass);
}

TEST_CASE("classical energy of the straight line") {
  const HerglotzProblem p = problem(0, 1, 0, 100, 0, 1, "0", "dx^2");
  const Trajectory x = pieces(p.grid, {{0, 1, "t"}});
  const ConservationReport q = conserved_quantities(p, x, integrate_z(p, x), group("1", "0"), 1e-8);
  REQUIRE(q.profiles.size() == 1);
  CHECK(q.profiles[0].t.front() == 0.0);
  CHECK(q.profiles[0].t.back() == 1.0);
  CHECK(q.profiles[0].mean == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(q.profiles[0].drift < 1e-8);
}

TEST_CASE("non-extremal x = t^2 drifts at both resolutions") {
  for (int n : {200, 400}) {
    const HerglotzProblem p = reference(n);
    const Trajectory x = pieces(p.grid, {{-1, 0, "-t"}, {0, 1, "t^2"}, {1, 2, "1"}});
    const ConservationReport q = conserved_quantities(p, x, integrate_z(p, x), group("1", "0"), 1e-6);
    CAPTURE(n);
    CHECK(q.profiles[0].drift > 0.01);
    CHECK_FALSE(q.pass);
  }
}

TEST_CASE("check_noether") {
  const HerglotzProblem p = reference(2000);
  {
    const Trajectory x = reference_extremal(p.grid);
    const NoetherVerdict v = check_noether(p, x, integrate_z(p, x), group("1", "0"), NoetherTolerances(1e-4));
    CHECK(v.pass);
    CHECK(v.failed_premise.empty());
  }
  {
    const Trajectory x = reference_extremal(p.grid);
    const NoetherVerdict v = check_noether(p, x, integrate_z(p, x), group("0", "0"), NoetherTolerances(1e-4));
    CHECK(v.invariance.pass);
    CHECK(v.conservation.pass);
    CHECK(v.pass);
  }
  {
    const Trajectory x = reference_nonextremal(p.grid);
    const NoetherVerdict v = check_noether(p, x, integrate_z(p, x), group("1", "0"), NoetherTolerances(1e-4));
    CHECK_FALSE(v.pass);
    CHECK(v.failed_premise == "EL residual");
  }
}

TEST_CASE("quantities are linear in the generators") {
  const HerglotzProblem p = problem(0, 2, 0.5, 80, 0.1, 0, "sin(t)", "dx^2 + x*dxtau - 0.3*z*x");
  const Trajectory x = pieces(p.grid, {{-0.5, 2, "sin(t)"}});
  const ZPath z = integrate_z(p, x);
  const ConservationReport base = conserved_quantities(p, x, z, group("t*x", "1 + x^2"), 1);
  const ConservationReport scaled = conserved_quantities(p, x, z, group("2.5*(t*x)", "2.5*(1 + x^2)"), 1);
  for (std::size_t j = 0; j < base.profiles.size(); ++j)
    for (std::size_t k = 0; k < base.profiles[j].q.size(); ++k)
      REQUIRE(std::abs(scaled.profiles[j].q[k] - 2.5 * base.profiles[j].q[k]) <= 1e-12);
}

TEST_CASE("tau = 0: the two quantity formulas coincide") {
  const HerglotzProblem p = problem(0, 2, 0, 200, 0.4, 0, "cos(t)", "dx^2/2 - x^2/2 - 0.2*z + t*x");
  const Trajectory x = pieces(p.grid, {{0, 2, "cos(t) + t^2"}});
  const ZPath z = integrate_z(p, x);
  const SymmetryGroup G = group("1 + t", "x");
  const ConservationReport q = conserved_quantities(p, x, z, G, 1);
  REQUIRE(q.profiles.size() == 1);
  const std::vector<PointData> pts = sample_points(p, x, z);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const PointData& d = pts[k];
    const GeneratorValues gv = evaluate_generators(G, d.t, d.now);
    const double q2 = d.lambda * (d.L.grad(kDx) * gv.xi + (d.L.value - d.now.dx * d.L.grad(kDx)) * gv.sigma);
    REQUIRE(std::abs(q.profiles[0].q[k] - q2) <= 1e-12);
  }
}

TEST_CASE("z-independent L: quantities equal the classical delayed ones") {
  std::mt19937 rng(99);
  const HerglotzProblem p = problem(0, 3, 1, 300, 0, 0, "cos(t)", "dx^2 + x*dxtau + sin(xtau)*dx - t*x");
  const Trajectory x = pieces(p.grid, {{-1, 3, "cos(t)"}});
  const ZPath z = integrate_z(p, x);
  const SymmetryGroup G = group("1", "t*x");
  const ConservationReport q = conserved_quantities(p, x, z, G, 1);
  const Grid& g = p.grid;

  const auto jet_at = [&](double t) {
    const TrajectoryState now = x.eval(t);
    const TrajectoryState lag = x.eval(t - g.tau);
    return gradient(p.lagrangian, {{Variable::t, t}, {Variable::x, now.x}, {Variable::dx, now.dx},
                                   {Variable::xtau, lag.x}, {Variable::dxtau, lag.dx}, {Variable::z, 0.0}});
  };
  std::uniform_int_distribution<int> pick(g.m, g.n + g.m);
  for (int k = 0; k < 100; ++k) {
    const int i = pick(rng);
    const double t = g.node(i);
    const TrajectoryState now = x.eval(t);
    const GeneratorValues gv = evaluate_generators(G, t, now);
    const Jet L = jet_at(t);
    CHECK(z.lambda()(i - g.m) == 1.0);
    if (i <= g.n) {
      const double mom = L.grad(kDx) + jet_at(t + g.tau).grad(kDxtau);
      const double direct = mom * gv.xi + (L.value - now.dx * mom) * gv.sigma;
      REQUIRE(std::abs(q.profiles[0].q[i - g.m] - direct) <= 1e-12);
    }
    if (i >= g.n) {
      const double direct = L.grad(kDx) * gv.xi + (L.value - now.dx * L.grad(kDx)) * gv.sigma;
      REQUIRE(std::abs(q.profiles[1].q[i - g.n] - direct) <= 1e-12);
    }
  }
}
