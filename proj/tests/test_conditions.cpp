#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "herglotz/conditions.hpp"
#include "herglotz/quadrature.hpp"

using namespace herglotz;
using namespace fixtures;

namespace {

const double e = std::exp(1.0);

double sample_at(const ResidualReport& r, double t) {
  for (std::size_t k = 0; k < r.t.size(); ++k)
    if (std::abs(r.t[k] - t) < 1e-12) return r.residual[k];
  FAIL("no sample at t = " << t);
  return 0;
}

}  // namespace

TEST_CASE("EL residuals of the reference extremal") {
  const HerglotzProblem p = reference(2000);
  const Trajectory x = reference_extremal(p.grid);
  const ZPath z = integrate_z(p, x);
  const auto [r1, r2] = el_residuals(p, x, z, 1e-4);
  CHECK(r1.label == "EL-1 on [a,b-tau]");
  CHECK(r1.t.front() == 0.0);
  CHECK(r1.t.back() == 1.0);
  CHECK(r1.sup_norm < 1e-4);
  CHECK(r1.pass);
  CHECK(r2.t.front() == 1.0);
  CHECK(r2.t.back() == 2.0);
  for (double v : r2.residual) REQUIRE(std::abs(v) <= 1e-10);
}

TEST_CASE("EL residuals vanish for L depending on t and z only") {
  const HerglotzProblem p = problem(0, 2, 1, 100, 0.3, 1, "-t", "t + z");
  const Trajectory x = pieces(p.grid, {{-1, 0, "-t"}, {0, 2, "sin(3*t)"}});
  const ZPath z = integrate_z(p, x);
  const auto [r1, r2] = el_residuals(p, x, z, 1e-10);
  for (double v : r1.residual) REQUIRE(std::abs(v) <= 1e-10);
  for (double v : r2.residual) REQUIRE(std::abs(v) <= 1e-10);
}

TEST_CASE("EL residual of the non-extremal x = t") {
  const HerglotzProblem p = reference(2000);
  const Trajectory x = reference_nonextremal(p.grid);
  const ZPath z = integrate_z(p, x);
  const auto [r1, r2] = el_residuals(p, x, z, 1e-6);
  CHECK(std::abs(sample_at(r1, 0.0) - 2 / e) <= 1e-4);
  CHECK(std::abs(sample_at(r1, 0.5) - 2 * std::exp(-1.5)) <= 1e-4);
  CHECK(r1.sup_norm == doctest::Approx(2 / e).epsilon(1e-4));
  CHECK(r1.sup_at == 0.0);
  CHECK_FALSE(r1.pass);
}

TEST_CASE("DBR residuals") {
  {
    const HerglotzProblem p = reference(2000);
    const Trajectory x = reference_extremal(p.grid);
    const auto [r1, r2] = dbr_residuals(p, x, integrate_z(p, x), 1e-4);
    CHECK(r1.label == "DBR-1 on [a,b-tau]");
    CHECK(r1.sup_norm < 1e-4);
    CHECK(r2.sup_norm < 1e-4);
  }
  {
    const HerglotzProblem p = problem(0, 1, 0, 100, 0, 1, "0", "t");
    const Trajectory x = pieces(p.grid, {{0, 1, "t^2"}});
    const auto [r1, r2] = dbr_residuals(p, x, integrate_z(p, x), 1e-10);
    for (double v : r1.residual) REQUIRE(std::abs(v) <= 1e-10);
    for (double v : r2.residual) REQUIRE(std::abs(v) <= 1e-10);
  }
  {
    const HerglotzProblem p = problem(0, 1, 0, 100, 0, 1, "0", "dx^2");
    const Trajectory x = pieces(p.grid, {{0, 1, "t"}});
    const auto [r1, r2] = dbr_residuals(p, x, integrate_z(p, x), 1e-8);
    CHECK(r1.sup_norm <= 1e-8);
    CHECK(r2.sup_norm <= 1e-8);
  }
}

TEST_CASE("hypothesis profiles") {
  const HerglotzProblem p = reference(2000);
  const Trajectory x = reference_extremal(p.grid);
  const ZPath z = integrate_z(p, x);
  const SymmetryGroup time{parse("1"), parse("0")};

  const HypothesisReports none = hypothesis_profiles(p, x, z, nullptr, 1e-6);
  CHECK_FALSE(none.noether.has_value());
  CHECK(none.extremal.t.front() == -1.0);
  CHECK(none.extremal.t.back() == 1.0);
  CHECK(none.extremal.sup_norm < 1e-6);

  const HypothesisReports both = hypothesis_profiles(p, x, z, &time, 1e-6);
  REQUIRE(both.noether.has_value());
  for (double v : both.noether->residual) CHECK(v == 0.0);

  const Trajectory sq = pieces(p.grid, {{-1, 0, "-t"}, {0, 2, "t^2"}});
  const HypothesisReports h = hypothesis_profiles(p, sq, integrate_z(p, sq), nullptr, 1e-6);
  CHECK(std::abs(sample_at(h.extremal, 0.5) - 4.0) <= 1e-4);
  CHECK_FALSE(h.extremal.pass);
}

TEST_CASE("report bookkeeping") {
  const std::vector<double> t = {0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const ResidualReport r =
      make_residual_report("r", t, {5, 0, 0, 9, 0, 0.25, 0}, {0.0, 0.3}, 0.1, 0.3);
  // The junction at the first sample is not excluded; 0.3 excludes 0.2 .. 0.4.
  REQUIRE(r.excluded_zones.size() == 1);
  CHECK(r.excluded_zones[0].from == doctest::Approx(0.2));
  CHECK(r.excluded[2]);
  CHECK(r.excluded[3]);
  CHECK(r.excluded[4]);
  CHECK_FALSE(r.excluded[5]);
  CHECK(r.sup_norm == 5);
  CHECK(r.sup_at == 0);
  CHECK_FALSE(r.pass);

  const ResidualReport q = make_residual_report("q", t, {0, 0, 0, 9, 0, 0.25, 0}, {0.3}, 0.1, 0.3);
  CHECK(q.sup_norm == 0.25);
  CHECK(q.sup_at == 0.5);
  CHECK(q.pass);

  const ResidualReport nan = make_residual_report("n", t, {0, std::nan(""), 0, 0, 0, 0, 0}, {}, 0.1, 1);
  CHECK_FALSE(nan.pass);
}

TEST_CASE("junctions include shifted breakpoints and the seam") {
  const HerglotzProblem p = reference(20);
  const std::vector<double> j = junction_times(reference_extremal(p.grid));
  CHECK(j == std::vector<double>{-1, 0, 1, 2});
  const HerglotzProblem c = problem(0, 1, 0, 10, 0, 1, "0", "dx^2");
  CHECK(junction_times(pieces(c.grid, {{0, 1, "t"}})).empty());
}

TEST_CASE("tau = 0: residual-1 is lambda times the Herglotz equation") {
  // Herglotz equation d2L - d/dt d3L + d3L dzL, coded directly with a central
  // five-point derivative of d3L along the trajectory.
  const HerglotzProblem p = problem(0, 2, 0, 400, 0.2, 0, "exp(-0.1*t)*cos(t)", "dx^2/2 - x^2/2 - 0.2*z + t*x*z");
  const Trajectory x = pieces(p.grid, {{0, 2, "exp(-0.1*t)*cos(t)"}});
  const ZPath z = integrate_z(p, x);
  const auto [r1, r2] = el_residuals(p, x, z, 1.0);
  const std::vector<PointData> pts = sample_points(p, x, z);
  const double h = p.grid.h;
  for (int k = 2; k + 2 <= p.grid.n; ++k) {
    const auto d3 = [&](int j) { return pts[j].L.grad(kDx); };
    const double dd3 = (d3(k - 2) - 8 * d3(k - 1) + 8 * d3(k + 1) - d3(k + 2)) / (12 * h);
    const auto& L = pts[k].L;
    const double direct = L.grad(kX) - dd3 + L.grad(kDx) * L.grad(kZ);
    REQUIRE(std::abs(r1.residual[k] - pts[k].lambda * direct) <= 1e-10);
  }

  // Writing some x as xtau must not change anything when tau = 0.
  HerglotzProblem q = p;
  q.lagrangian = parse("dx*dxtau/2 - x*xtau/2 - 0.2*z + t*xtau*z");
  const ZPath zq = integrate_z(q, x);
  const auto [q1, q2] = el_residuals(q, x, zq, 1.0);
  for (std::size_t k = 0; k < r1.residual.size(); ++k)
    REQUIRE(std::abs(q1.residual[k] - r1.residual[k]) <= 1e-10);
  // The degenerate EL-2 interval is the single point b.
  REQUIRE(r2.residual.size() == 1);
  CHECK(std::abs(r2.residual[0] * z.lambda()(p.grid.n) - r1.residual.back()) <= 1e-10);
  CHECK(std::abs(q2.residual[0] - r2.residual[0]) <= 1e-10);
}

TEST_CASE("z-independent L: residuals equal the delayed Euler-Lagrange equations") {
  // d2L + d4L(t+tau) - d/dt[d3L + d5L(t+tau)] on [a, b-tau]; d2L - d/dt d3L on [b-tau, b].
  const HerglotzProblem p = problem(0, 3, 1, 300, 0, 0, "cos(t)", "dx^2 + x*dxtau + sin(xtau)*dx - t*x");
  const Trajectory x = pieces(p.grid, {{-1, 3, "cos(t)"}});
  const ZPath z = integrate_z(p, x);
  CHECK(z.lambda() == Eigen::VectorXd::Ones(p.grid.n + 1));
  const auto [r1, r2] = el_residuals(p, x, z, 1.0);
  const std::vector<PointData> pts = sample_points(p, x, z);
  const Grid& g = p.grid;
  const int m = g.m;
  // Junctions: the seam only (x is one smooth piece).
  const auto momentum = [&](int i) { return pts[i - m].L.grad(kDx) + pts[i].L.grad(kDxtau); };
  for (int i = m; i <= g.n; ++i) {
    const double d = five_point_derivative(momentum, i, g.h, m, g.n, m, g.n);
    const double direct = pts[i - m].L.grad(kX) + pts[i].L.grad(kXtau) - d;
    REQUIRE(std::abs(r1.residual[i - m] - direct) <= 1e-10);
  }
  const auto d3 = [&](int i) { return pts[i - m].L.grad(kDx); };
  for (int i = g.n; i <= g.n + m; ++i) {
    const double d = five_point_derivative(d3, i, g.h, g.n, g.n + m, m, g.n + m);
    REQUIRE(std::abs(r2.residual[i - g.n] - (pts[i - m].L.grad(kX) - d)) <= 1e-10);
  }
}

TEST_CASE("hat-function gradients equal the weak form of the residuals") {
  // A smooth non-extremal of the reference problem; x is C^2 across t = 0.
  const int n = 200;
  const HerglotzProblem p = reference(n);
  const HerglotzProblem fine = reference(2 * n);
  const auto traj = [](const Grid& g) { return pieces(g, {{-1, 0, "-t"}, {0, 2, "-t + 0.5*t^3"}}); };
  const Trajectory x = traj(p.grid);
  const Trajectory xf = traj(fine.grid);
  const ZPath z = integrate_z(p, x);
  const ZPath zf = integrate_z(fine, xf);
  const auto [f1, f2] = el_residuals(fine, xf, zf, 1.0);

  // Strong residual R = EL-1 on [a, b-tau] and lambda * EL-2 on [b-tau, b],
  // on the fine grid (index 2k is coarse node m + k).
  const auto R = [&](int fk) {
    if (fk <= fine.grid.n - fine.grid.m) return f1.residual[fk];
    const int j = fk - (fine.grid.n - fine.grid.m);
    return f2.residual[j] * zf.lambda()(fk);
  };
  const Grid& g = p.grid;
  const double lb = z.lambda()(g.n);
  const std::vector<double> junctions = junction_times(x);
  int checked = 0;
  for (int i = g.m + 1; i < g.last_index(); ++i) {
    const double ti = g.node(i);
    bool near = false;
    for (double jt : junctions) near = near || std::abs(ti - jt) < 3 * g.h;
    if (near) continue;
    const int k = i - g.m;
    // Simpson on both panels of the hat, midpoints taken from the fine grid.
    const double weak =
        (g.h / 6) * (4 * R(2 * k - 1) * 0.5 + R(2 * k)) + (g.h / 6) * (R(2 * k) + 4 * R(2 * k + 1) * 0.5);
    const VariationDirection eta = VariationDirection::unit(g, i, VariationDirection::Basis::hat);
    const double grad = first_variation(p, x, z, eta);
    CAPTURE(ti);
    REQUIRE(std::abs(grad - weak / lb) <= 1e-8);
    ++checked;
  }
  CHECK(checked > 150);
}
