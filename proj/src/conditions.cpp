#include "herglotz/conditions.hpp"

#include <algorithm>
#include <cmath>

#include "herglotz/quadrature.hpp"

namespace herglotz {

void validate(const SymmetryGroup& group) {
  VariableSet allowed;
  allowed.set(static_cast<std::size_t>(Variable::t));
  allowed.set(static_cast<std::size_t>(Variable::x));
  for (const Expression* e : {&group.sigma, &group.xi}) {
    if ((e->variables() & ~allowed).any())
      throw Error(ErrorKind::Config, "symmetry generators may only use t and x: " + e->to_string());
  }
}

GeneratorValues evaluate_generators(const SymmetryGroup& group, double t,
                                    const TrajectoryState& state) {
  Bindings b;
  b.set(Variable::t, t).set(Variable::x, state.x);
  const Jet s = gradient(group.sigma, b);
  const Jet x = gradient(group.xi, b);
  return {s.value, s.grad(0) + s.grad(1) * state.dx, x.value, x.grad(0) + x.grad(1) * state.dx};
}

std::vector<double> junction_times(const Trajectory& traj) {
  const Grid& g = traj.grid();
  std::vector<double> out;
  for (double bp : traj.breakpoints()) {
    out.push_back(bp);
    if (g.tau > 0.0) {
      out.push_back(bp + g.tau);
      out.push_back(bp - g.tau);
    }
  }
  if (g.tau > 0.0) out.push_back(g.seam());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ResidualReport make_residual_report(std::string label, std::vector<double> t,
                                    std::vector<double> residual,
                                    const std::vector<double>& junctions, double radius,
                                    double tolerance) {
  ResidualReport r;
  r.label = std::move(label);
  r.tolerance = tolerance;
  r.excluded.assign(t.size(), false);
  const double slack = 1e-9 * radius;
  if (!t.empty()) {
    const double lo = t.front();
    const double hi = t.back();
    for (double j : junctions) {
      // At the left end every value is a right limit and the stencils point
      // inward, so a junction there needs no exclusion.
      if (std::abs(j - lo) <= slack) continue;
      const ExcludedZone zone{j - radius, j + radius};
      if (zone.to < lo - slack || zone.from > hi + slack) continue;
      r.excluded_zones.push_back(zone);
      for (std::size_t k = 0; k < t.size(); ++k)
        if (t[k] >= zone.from - slack && t[k] <= zone.to + slack) r.excluded[k] = true;
    }
  }
  r.sup_at = t.empty() ? 0.0 : t.front();
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (r.excluded[k]) continue;
    const double v = std::abs(residual[k]);
    // NaN never compares greater, so test it explicitly.
    if (v > r.sup_norm || std::isnan(v)) {
      r.sup_norm = v;
      r.sup_at = t[k];
      if (std::isnan(v)) break;
    }
  }
  r.pass = r.sup_norm <= tolerance;
  r.t = std::move(t);
  r.residual = std::move(residual);
  return r;
}

std::vector<PointData> sample_points(const HerglotzProblem& problem, const Trajectory& traj,
                                     const ZPath& path) {
  const Grid& g = traj.grid();
  std::vector<PointData> out;
  out.reserve(g.n + 1);
  for (int k = 0; k <= g.n; ++k) out.push_back(point_data(problem, traj, path, g.node(g.m + k)));
  return out;
}

namespace {

// Grid-indexed views: `here(i)` is the data at node i (valid for i in
// [m, n+m]) and `ahead(i)` the data at node i + m (valid for i in [0, n]).
struct Nodes {
  const Grid& g;
  const std::vector<PointData>& p;
  const PointData& here(int i) const { return p[i - g.m]; }
  const PointData& ahead(int i) const { return p[i]; }
};

std::vector<double> node_times(const Grid& g, int lo, int hi) {
  std::vector<double> t;
  for (int i = lo; i <= hi; ++i) t.push_back(g.node(i));
  return t;
}

}  // namespace

std::pair<ResidualReport, ResidualReport> el_residuals(const HerglotzProblem& problem,
                                                       const Trajectory& traj, const ZPath& path,
                                                       double tolerance) {
  const Grid& g = traj.grid();
  const std::vector<PointData> pts = sample_points(problem, traj, path);
  const Nodes N{g, pts};
  const int m = g.m;
  const int n = g.n;

  const auto c3 = [&](int i) { return N.here(i).L.grad(kDx); };
  const auto c5 = [&](int i) { return N.ahead(i).L.grad(kDxtau); };

  std::vector<double> r1;
  for (int i = m; i <= n; ++i) {
    const PointData& h = N.here(i);
    const PointData& a = N.ahead(i);
    const double d5 = five_point_derivative(c5, i, g.h, m, n, 0, n);
    const double d3 = five_point_derivative(c3, i, g.h, m, n, m, n + m);
    r1.push_back(a.lambda * (a.L.grad(kXtau) - d5 + a.L.grad(kDxtau) * a.L.grad(kZ)) +
                 h.lambda * (h.L.grad(kX) - d3 + h.L.grad(kDx) * h.L.grad(kZ)));
  }
  std::vector<double> r2;
  for (int i = n; i <= n + m; ++i) {
    const PointData& h = N.here(i);
    const double d3 = five_point_derivative(c3, i, g.h, n, n + m, m, n + m);
    double r = h.L.grad(kX) - d3 + h.L.grad(kDx) * h.L.grad(kZ);
    // Without delay the point b still sees the "delayed" slots.
    if (m == 0) {
      const double d5 = five_point_derivative(c5, i, g.h, n, n, 0, n);
      r += h.L.grad(kXtau) - d5 + h.L.grad(kDxtau) * h.L.grad(kZ);
    }
    r2.push_back(r);
  }

  const std::vector<double> j = junction_times(traj);
  const double rad = exclusion_radius(g);
  return {make_residual_report("EL-1 on [a,b-tau]", node_times(g, m, n), std::move(r1), j, rad,
                               tolerance),
          make_residual_report("EL-2 on [b-tau,b]", node_times(g, n, n + m), std::move(r2), j, rad,
                               tolerance)};
}

std::pair<ResidualReport, ResidualReport> dbr_residuals(const HerglotzProblem& problem,
                                                        const Trajectory& traj, const ZPath& path,
                                                        double tolerance) {
  const Grid& g = traj.grid();
  const std::vector<PointData> pts = sample_points(problem, traj, path);
  const Nodes N{g, pts};
  const int m = g.m;
  const int n = g.n;

  const auto F = [&](int i) {
    const PointData& h = N.here(i);
    const PointData& a = N.ahead(i);
    return h.lambda * h.L.value -
           h.now.dx * (h.lambda * h.L.grad(kDx) + a.lambda * a.L.grad(kDxtau));
  };
  const auto G = [&](int i) {
    const PointData& h = N.here(i);
    return h.lambda * (h.L.value - h.now.dx * h.L.grad(kDx));
  };

  std::vector<double> r1;
  for (int i = m; i <= n; ++i) {
    const PointData& h = N.here(i);
    r1.push_back(five_point_derivative(F, i, g.h, m, n, m, n) - h.lambda * h.L.grad(kT));
  }
  std::vector<double> r2;
  for (int i = n; i <= n + m; ++i) {
    const PointData& h = N.here(i);
    r2.push_back(five_point_derivative(G, i, g.h, n, n + m, m, n + m) - h.lambda * h.L.grad(kT));
  }

  const std::vector<double> j = junction_times(traj);
  const double rad = exclusion_radius(g);
  return {make_residual_report("DBR-1 on [a,b-tau]", node_times(g, m, n), std::move(r1), j, rad,
                               tolerance),
          make_residual_report("DBR-2 on [b-tau,b]", node_times(g, n, n + m), std::move(r2), j,
                               rad, tolerance)};
}

HypothesisReports hypothesis_profiles(const HerglotzProblem& problem, const Trajectory& traj,
                                      const ZPath& path, const SymmetryGroup* group,
                                      double tolerance) {
  const Grid& g = traj.grid();
  const std::vector<PointData> pts = sample_points(problem, traj, path);
  const Nodes N{g, pts};
  const int m = g.m;
  const int n = g.n;
  const std::vector<double> j = junction_times(traj);
  const double rad = exclusion_radius(g);

  std::vector<double> h1;
  for (int i = 0; i <= n; ++i) {
    const PointData& a = N.ahead(i);
    const TrajectoryState x = traj.eval(g.node(i));
    h1.push_back(a.L.grad(kXtau) * x.dx + a.L.grad(kDxtau) * x.ddx);
  }
  HypothesisReports out{
      make_residual_report("HYP-extremal on [a-tau,b-tau]", node_times(g, 0, n), std::move(h1), j,
                           rad, tolerance),
      std::nullopt};

  if (group) {
    std::vector<double> h2;
    for (int i = m; i <= n; ++i) {
      const PointData& a = N.ahead(i);
      const TrajectoryState& x = N.here(i).now;
      const GeneratorValues gv = evaluate_generators(*group, g.node(i), x);
      h2.push_back(a.L.grad(kXtau) * gv.xi + a.L.grad(kDxtau) * (gv.dxi - x.dx * gv.dsigma));
    }
    out.noether = make_residual_report("HYP-noether on [a,b-tau]", node_times(g, m, n),
                                       std::move(h2), j, rad, tolerance);
  }
  return out;
}

}  // namespace herglotz
