#include "herglotz/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "herglotz/errors.hpp"
#include "herglotz/quadrature.hpp"

namespace herglotz {

std::vector<double> integration_knots(const Trajectory& traj) {
  const Grid& g = traj.grid();
  std::vector<double> knots;
  knots.reserve(g.n + 1);
  for (int i = g.first_index(); i <= g.last_index(); ++i) knots.push_back(g.node(i));

  std::vector<double> extra;
  for (double bp : traj.breakpoints()) {
    extra.push_back(bp);
    extra.push_back(bp + g.tau);
    extra.push_back(bp - g.tau);
  }
  for (double t : extra) {
    if (t <= g.a || t >= g.b || g.node_index(t)) continue;
    knots.push_back(t);
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end(),
                          [&](double p, double q) { return std::abs(p - q) <= 1e-12 * g.h; }),
              knots.end());
  return knots;
}

namespace {

struct Slope {
  double dz;
  double dlog;
};

Slope rhs(const HerglotzProblem& problem, const Trajectory& traj, double t, double z, Side side) {
  const Dual<double> L = value_and_partial(problem.lagrangian, Variable::z,
                                           lagrangian_arguments(traj, t, z, side));
  return {L.value, -L.grad};
}

[[noreturn]] void non_finite(double t) {
  std::ostringstream os;
  os << "integration produced a non-finite value at t = " << t;
  throw Error(ErrorKind::NonFinite, os.str());
}

}  // namespace

ZPath integrate_z(const HerglotzProblem& problem, const Trajectory& traj) {
  ZPath p;
  p.grid_ = traj.grid();
  p.knots_ = integration_knots(traj);
  const auto count = static_cast<Eigen::Index>(p.knots_.size());
  p.z_.resize(count);
  p.log_lambda_.resize(count);
  p.dz_right_.resize(count);
  p.dz_left_.resize(count);
  p.dlog_right_.resize(count);
  p.dlog_left_.resize(count);

  double z = problem.gamma;
  double ll = 0.0;
  p.z_(0) = z;
  p.log_lambda_(0) = ll;
  p.dz_left_(0) = p.dlog_left_(0) = 0.0;

  for (Eigen::Index j = 0; j + 1 < count; ++j) {
    const double t0 = p.knots_[j];
    const double t1 = p.knots_[j + 1];
    const double w = t1 - t0;
    const double tm = t0 + 0.5 * w;

    const Slope k1 = rhs(problem, traj, t0, z, Side::right);
    const Slope k2 = rhs(problem, traj, tm, z + 0.5 * w * k1.dz, Side::right);
    const Slope k3 = rhs(problem, traj, tm, z + 0.5 * w * k2.dz, Side::right);
    const Slope k4 = rhs(problem, traj, t1, z + w * k3.dz, Side::left);

    p.dz_right_(j) = k1.dz;
    p.dlog_right_(j) = k1.dlog;

    z += w / 6.0 * (k1.dz + 2.0 * k2.dz + 2.0 * k3.dz + k4.dz);
    ll += w / 6.0 * (k1.dlog + 2.0 * k2.dlog + 2.0 * k3.dlog + k4.dlog);
    if (!std::isfinite(z) || !std::isfinite(ll)) non_finite(t1);

    p.z_(j + 1) = z;
    p.log_lambda_(j + 1) = ll;
    const Slope end = rhs(problem, traj, t1, z, Side::left);
    p.dz_left_(j + 1) = end.dz;
    p.dlog_left_(j + 1) = end.dlog;
  }
  p.dz_right_(count - 1) = p.dz_left_(count - 1);
  p.dlog_right_(count - 1) = p.dlog_left_(count - 1);

  const Grid& g = p.grid_;
  p.z_nodes_.resize(g.n + 1);
  p.lambda_nodes_.resize(g.n + 1);
  Eigen::Index j = 0;
  for (int k = 0; k <= g.n; ++k) {
    const double t = g.node(g.m + k);
    while (std::abs(p.knots_[j] - t) > 1e-12 * g.h) ++j;
    p.z_nodes_(k) = p.z_(j);
    p.lambda_nodes_(k) = k == 0 ? 1.0 : std::exp(p.log_lambda_(j));
  }
  return p;
}

double ZPath::hermite(const Eigen::VectorXd& y, const Eigen::VectorXd& slope_right,
                      const Eigen::VectorXd& slope_left, double t) const {
  const double slack = 1e-9 * grid_.h;
  if (!(t >= grid_.a - slack && t <= grid_.b + slack)) {
    std::ostringstream os;
    os << "t = " << t << " outside [" << grid_.a << ", " << grid_.b << "]";
    throw Error(ErrorKind::OutOfDomain, os.str());
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  Eigen::Index j = std::clamp<Eigen::Index>(it - knots_.begin() - 1, 0, knots_.size() - 2);
  const double t0 = knots_[j];
  const double w = knots_[j + 1] - t0;
  const double u = std::clamp((t - t0) / w, 0.0, 1.0);
  if (u == 0.0) return y(j);
  if (u == 1.0) return y(j + 1);
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y(j) + (u3 - 2 * u2 + u) * w * slope_right(j) +
         (-2 * u3 + 3 * u2) * y(j + 1) + (u3 - u2) * w * slope_left(j + 1);
}

double ZPath::z_at(double t) const { return hermite(z_, dz_right_, dz_left_, t); }

double ZPath::lambda_at(double t) const {
  if (t == grid_.a) return 1.0;
  return std::exp(hermite(log_lambda_, dlog_right_, dlog_left_, t));
}

double lambda_at(const ZPath& path, double t) { return path.lambda_at(t); }

PointData point_data(const HerglotzProblem& problem, const Trajectory& traj, const ZPath& path,
                     double t, Side side) {
  PointData d;
  d.t = t;
  d.now = traj.eval(t, side);
  d.lag = traj.grid().tau == 0.0 ? d.now : traj.eval(t - traj.grid().tau, side);
  d.z = path.z_at(t);
  d.lambda = path.lambda_at(t);
  Bindings b;
  b.set(Variable::t, t)
      .set(Variable::x, d.now.x)
      .set(Variable::dx, d.now.dx)
      .set(Variable::xtau, d.lag.x)
      .set(Variable::dxtau, d.lag.dx)
      .set(Variable::z, d.z);
  d.L = gradient(problem.lagrangian, b);
  return d;
}

VariationWeights variation_weights(const HerglotzProblem& problem, const Trajectory& traj,
                                   const ZPath& path, double s, Side side, bool delayed_active) {
  const PointData here = point_data(problem, traj, path, s, side);
  VariationWeights w{here.lambda * here.L.grad(kX), here.lambda * here.L.grad(kDx)};
  if (delayed_active) {
    const double tau = traj.grid().tau;
    const PointData ahead = tau == 0.0 ? here : point_data(problem, traj, path, s + tau, side);
    w.eta += ahead.lambda * ahead.L.grad(kXtau);
    w.deta += ahead.lambda * ahead.L.grad(kDxtau);
  }
  return w;
}

double first_variation(const HerglotzProblem& problem, const Trajectory& traj, const ZPath& path,
                       const VariationDirection& eta) {
  if (eta.values().isZero(0.0)) return 0.0;
  const Grid& g = traj.grid();
  const double seam = g.seam();
  const auto& knots = path.knots();
  const auto integrand = [&](double s, std::size_t panel, bool from_right) {
    const bool delayed = knots[panel + 1] <= seam + 1e-12 * g.h;
    const Side side = from_right ? Side::right : Side::left;
    const VariationWeights w = variation_weights(problem, traj, path, s, side, delayed);
    const TrajectoryState e = eta.eval(s, side);
    return w.eta * e.x + w.deta * e.dx;
  };
  const std::vector<double> acc = cumulative_simpson(knots, integrand);
  return acc.back() / path.lambda()(path.lambda().size() - 1);
}

}  // namespace herglotz
