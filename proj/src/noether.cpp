#include "herglotz/noether.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "herglotz/quadrature.hpp"

namespace herglotz {

ResidualReport group_variation(const HerglotzProblem& problem, const Trajectory& traj,
                               const ZPath& path, const SymmetryGroup& group, double tolerance) {
  validate(group);
  const Grid& g = traj.grid();
  const auto& knots = path.knots();
  const double delay_start = g.a + g.tau;

  const auto integrand = [&](double s, std::size_t panel, bool from_right) {
    const Side side = from_right ? Side::right : Side::left;
    const PointData d = point_data(problem, traj, path, s, side);
    const GeneratorValues gv = evaluate_generators(group, s, d.now);
    const auto& L = d.L;
    double f = L.grad(kT) * gv.sigma + L.grad(kX) * gv.xi +
               L.grad(kDx) * (gv.dxi - d.now.dx * gv.dsigma) + L.value * gv.dsigma;
    const bool delayed = g.tau == 0.0 || knots[panel] >= delay_start - 1e-12 * g.h;
    if (delayed) {
      const GeneratorValues gd =
          g.tau == 0.0 ? gv : evaluate_generators(group, s - g.tau, d.lag);
      f += L.grad(kXtau) * gd.xi + L.grad(kDxtau) * (gd.dxi - d.lag.dx * gd.dsigma);
    }
    return d.lambda * f;
  };
  const std::vector<double> acc = cumulative_simpson(knots, integrand);

  std::vector<double> t;
  std::vector<double> h;
  std::size_t j = 0;
  for (int k = 0; k <= g.n; ++k) {
    const double tk = g.node(g.m + k);
    while (std::abs(knots[j] - tk) > 1e-12 * g.h) ++j;
    t.push_back(tk);
    h.push_back(acc[j] / path.lambda()(k));
  }
  // The defect is an integral, so there is nothing to exclude.
  return make_residual_report("INVARIANCE h(t) on [a,b]", std::move(t), std::move(h), {}, 0.0,
                              tolerance);
}

namespace {

QuantityProfile make_profile(std::string label, std::vector<double> t, std::vector<double> q,
                             const std::vector<double>& junctions, double radius,
                             double tolerance) {
  // Reuse the residual exclusion logic for the sample mask.
  const ResidualReport mask =
      make_residual_report(label, t, std::vector<double>(t.size(), 0.0), junctions, radius, 0.0);
  QuantityProfile p;
  p.label = std::move(label);
  p.excluded = mask.excluded;
  p.excluded_zones = mask.excluded_zones;
  p.tolerance = tolerance;

  double sum = 0.0;
  int kept = 0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (p.excluded[k]) continue;
    sum += q[k];
    ++kept;
  }
  p.mean = kept ? sum / kept : 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (p.excluded[k]) continue;
    const double d = std::abs(q[k] - p.mean);
    if (d > p.drift || std::isnan(d)) p.drift = d;
  }
  p.pass = p.drift <= tolerance;
  p.t = std::move(t);
  p.q = std::move(q);
  return p;
}

}  // namespace

ConservationReport conserved_quantities(const HerglotzProblem& problem, const Trajectory& traj,
                                        const ZPath& path, const SymmetryGroup& group,
                                        double tolerance) {
  validate(group);
  const Grid& g = traj.grid();
  const std::vector<PointData> pts = sample_points(problem, traj, path);
  const int m = g.m;
  const int n = g.n;
  const std::vector<double> j = junction_times(traj);
  const double rad = exclusion_radius(g);

  std::vector<double> t1, q1;
  for (int i = m; i <= n; ++i) {
    const PointData& h = pts[i - m];
    const PointData& a = pts[i];
    const GeneratorValues gv = evaluate_generators(group, h.t, h.now);
    const double p = h.lambda * h.L.grad(kDx) + a.lambda * a.L.grad(kDxtau);
    t1.push_back(h.t);
    q1.push_back(p * gv.xi + (h.lambda * h.L.value - h.now.dx * p) * gv.sigma);
  }

  ConservationReport out;
  if (g.tau == 0.0) {
    out.profiles.push_back(make_profile("Q on [a,b]", std::move(t1), std::move(q1), j, rad, tolerance));
  } else {
    std::vector<double> t2, q2;
    for (int i = n; i <= n + m; ++i) {
      const PointData& h = pts[i - m];
      const GeneratorValues gv = evaluate_generators(group, h.t, h.now);
      t2.push_back(h.t);
      q2.push_back(h.lambda *
                   (h.L.grad(kDx) * gv.xi + (h.L.value - h.now.dx * h.L.grad(kDx)) * gv.sigma));
    }
    out.profiles.push_back(
        make_profile("Q1 on [a,b-tau]", std::move(t1), std::move(q1), j, rad, tolerance));
    out.profiles.push_back(
        make_profile("Q2 on [b-tau,b]", std::move(t2), std::move(q2), j, rad, tolerance));
  }
  out.pass = std::all_of(out.profiles.begin(), out.profiles.end(),
                         [](const QuantityProfile& p) { return p.pass; });
  return out;
}

NoetherVerdict check_noether(const HerglotzProblem& problem, const Trajectory& traj,
                             const ZPath& path, const SymmetryGroup& group,
                             const NoetherTolerances& tol) {
  NoetherVerdict v;
  std::tie(v.el1, v.el2) = el_residuals(problem, traj, path, tol.el);
  HypothesisReports hyp = hypothesis_profiles(problem, traj, path, &group, tol.hypothesis);
  v.h1 = std::move(hyp.extremal);
  v.h2 = std::move(*hyp.noether);
  v.invariance = group_variation(problem, traj, path, group, tol.invariance);
  v.conservation = conserved_quantities(problem, traj, path, group, tol.drift);

  if (!v.el1.pass || !v.el2.pass)
    v.failed_premise = "EL residual";
  else if (!v.h1.pass)
    v.failed_premise = "hypothesis H1";
  else if (!v.h2.pass)
    v.failed_premise = "hypothesis H2";
  else if (!v.invariance.pass)
    v.failed_premise = "invariance";
  else if (!v.conservation.pass)
    v.failed_premise = "conservation";
  v.pass = v.failed_premise.empty();
  return v;
}

}  // namespace herglotz
