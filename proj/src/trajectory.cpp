#include "herglotz/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "herglotz/errors.hpp"

namespace herglotz {

namespace {

double domain_slack(const Grid& g) { return 1e-9 * g.h; }

void check_domain(const Grid& g, double t) {
  if (!(t >= g.start() - domain_slack(g) && t <= g.b + domain_slack(g))) {
    std::ostringstream os;
    os << "t = " << t << " outside [" << g.start() << ", " << g.b << "]";
    throw Error(ErrorKind::OutOfDomain, os.str());
  }
}

}  // namespace

// ------------------------------------------------------ VariationDirection

VariationDirection::VariationDirection(const Grid& grid, Eigen::VectorXd values, Basis basis)
    : grid_(grid), values_(std::move(values)), basis_(basis) {
  if (values_.size() != grid_.n + 1) {
    throw Error(ErrorKind::Config, "variation needs one value per node on [a, b]");
  }
  if (values_(0) != 0.0 || values_(grid_.n) != 0.0) {
    throw Error(ErrorKind::FixedNode, "variation must vanish at a and b");
  }
  if (basis_ == Basis::spline) spline_ = UniformCubicSpline<double>(grid_.a, grid_.h, values_);
}

VariationDirection VariationDirection::unit(const Grid& grid, int node_index, Basis basis) {
  if (!grid.is_free(node_index)) throw Error(ErrorKind::FixedNode, "unit variation at a fixed node");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(grid.n + 1);
  v(node_index - grid.m) = 1.0;
  return VariationDirection(grid, std::move(v), basis);
}

VariationDirection VariationDirection::scaled(double factor) const {
  return VariationDirection(grid_, values_ * factor, basis_);
}

TrajectoryState VariationDirection::eval(double t, Side side) const {
  check_domain(grid_, t);
  // eta vanishes on the history, so its left limit at a is zero too.
  if (t < grid_.a || (t == grid_.a && side == Side::left)) return {};
  if (basis_ == Basis::spline) {
    const auto v = spline_.eval(std::min(t, grid_.b));
    return {v.f, v.df, v.ddf};
  }
  // Piecewise linear; at a node the slope is taken from the requested side.
  int k = grid_.interval_index(t) - grid_.m;
  if (auto node = grid_.node_index(t)) {
    const int j = *node - grid_.m;
    k = side == Side::right ? std::min(j, grid_.n - 1) : std::max(j - 1, 0);
  }
  k = std::clamp(k, 0, grid_.n - 1);
  const double t0 = grid_.node(k + grid_.m);
  const double slope = (values_(k + 1) - values_(k)) / grid_.h;
  return {values_(k) + slope * (t - t0), slope, 0.0};
}

// -------------------------------------------------------------- Trajectory

Trajectory Trajectory::sampled(const Grid& grid, Eigen::VectorXd node_values) {
  std::vector<int> split;
  if (grid.m > 0) split.push_back(grid.m);
  return sampled(grid, std::move(node_values), std::move(split));
}

Trajectory Trajectory::sampled(const Grid& grid, Eigen::VectorXd node_values,
                               std::vector<int> breakpoint_nodes) {
  if (node_values.size() != grid.node_count()) {
    throw Error(ErrorKind::Config, "sampled trajectory needs one value per grid node");
  }
  if (!node_values.allFinite()) throw Error(ErrorKind::NonFinite, "non-finite node value");
  std::sort(breakpoint_nodes.begin(), breakpoint_nodes.end());
  breakpoint_nodes.erase(std::unique(breakpoint_nodes.begin(), breakpoint_nodes.end()),
                         breakpoint_nodes.end());
  for (int i : breakpoint_nodes) {
    if (i <= 0 || i >= grid.node_count() - 1) {
      throw Error(ErrorKind::Config, "breakpoint nodes must be interior grid nodes");
    }
  }

  Trajectory tr;
  tr.grid_ = grid;
  tr.breakpoint_nodes_ = breakpoint_nodes;
  for (int i : breakpoint_nodes) tr.breakpoints_.push_back(grid.node(i));

  auto segments = std::make_shared<std::vector<SplineSegment>>();
  int first = 0;
  auto cut = breakpoint_nodes;
  cut.push_back(grid.node_count() - 1);
  for (int last : cut) {
    Eigen::VectorXd seg = node_values.segment(first, last - first + 1);
    segments->push_back({first, last, UniformCubicSpline<double>(grid.node(first), grid.h, seg)});
    first = last;
  }
  tr.segments_ = std::move(segments);
  tr.values_ = std::make_shared<const Eigen::VectorXd>(std::move(node_values));
  return tr;
}

Trajectory Trajectory::piecewise(const Grid& grid, std::vector<Piece> pieces) {
  if (pieces.empty()) throw Error(ErrorKind::Config, "piecewise trajectory needs pieces");
  const double tol = 1e-12 * std::max(1.0, grid.b - grid.start());
  VariableSet allowed;
  allowed.set(static_cast<int>(Variable::t));
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const auto& p = pieces[k];
    if (!(p.from < p.to)) throw Error(ErrorKind::Config, "piece with empty range");
    if ((p.expr.variables() & ~allowed).any()) {
      throw Error(ErrorKind::Config, "trajectory pieces may only depend on t");
    }
    if (k > 0 && std::abs(pieces[k - 1].to - p.from) > tol) {
      throw Error(ErrorKind::Config, "trajectory pieces must be contiguous");
    }
  }
  if (pieces.front().from > grid.start() + tol || pieces.back().to < grid.b - tol) {
    throw Error(ErrorKind::Config, "trajectory pieces must cover [a - tau, b]");
  }

  Trajectory tr;
  tr.grid_ = grid;
  for (std::size_t k = 0; k + 1 < pieces.size(); ++k) {
    const double s = pieces[k].to;
    pieces[k + 1].from = s;
    const double left = herglotz::eval(pieces[k].expr, Bindings{{Variable::t, s}});
    const double right = herglotz::eval(pieces[k + 1].expr, Bindings{{Variable::t, s}});
    if (std::abs(left - right) > 1e-9) {
      std::ostringstream os;
      os << "trajectory pieces jump by " << std::abs(left - right) << " at t = " << s;
      throw Error(ErrorKind::Config, os.str());
    }
    if (s > grid.start() && s < grid.b) tr.breakpoints_.push_back(s);
  }
  tr.pieces_ = std::make_shared<const std::vector<Piece>>(std::move(pieces));
  return tr;
}

const Eigen::VectorXd& Trajectory::node_values() const {
  if (!values_) throw Error(ErrorKind::Config, "node values requested from a piecewise trajectory");
  return *values_;
}

const std::vector<Trajectory::SplineSegment>& Trajectory::segments() const {
  if (!segments_) throw Error(ErrorKind::Config, "spline segments requested from a piecewise trajectory");
  return *segments_;
}

Eigen::VectorXd Trajectory::sample_nodes() const {
  if (values_ && offsets_.empty()) return *values_;
  Eigen::VectorXd out(grid_.node_count());
  for (int i = 0; i < grid_.node_count(); ++i) out(i) = eval(grid_.node(i)).x;
  return out;
}

Trajectory Trajectory::plus(const VariationDirection& eta, double eps) const {
  Trajectory out = *this;
  out.offsets_.push_back({eta, eps});
  return out;
}

TrajectoryState Trajectory::eval(double t, Side side) const {
  check_domain(grid_, t);
  t = std::clamp(t, grid_.start(), grid_.b);
  TrajectoryState s = pieces_ ? eval_pieces(t, side) : eval_splines(t, side);
  for (const auto& off : offsets_) {
    const TrajectoryState e = off.eta.eval(t, side);
    s.x += off.eps * e.x;
    s.dx += off.eps * e.dx;
    s.ddx += off.eps * e.ddx;
  }
  return s;
}

TrajectoryState Trajectory::eval_splines(double t, Side side) const {
  const auto& segs = *segments_;
  std::size_t k = 0;
  const auto node = grid_.node_index(t);
  if (node) {
    // At a junction node the side picks the segment.
    for (k = 0; k < segs.size(); ++k) {
      const auto& s = segs[k];
      if (side == Side::right ? (*node >= s.first_node && (*node < s.last_node || k + 1 == segs.size()))
                              : (*node > s.first_node || k == 0) && *node <= s.last_node) {
        break;
      }
    }
    const auto& seg = segs[std::min(k, segs.size() - 1)];
    const Eigen::Index local = *node - seg.first_node;
    const auto v = local == seg.spline.intervals() ? seg.spline.eval_local(local - 1, 1.0)
                                                   : seg.spline.eval_local(local, 0.0);
    return {(*values_)(*node), v.df, v.ddf};
  }
  while (k + 1 < segs.size() && t > grid_.node(segs[k].last_node)) ++k;
  const auto v = segs[k].spline.eval(t);
  return {v.f, v.df, v.ddf};
}

TrajectoryState Trajectory::eval_pieces(double t, Side side) const {
  const auto& ps = *pieces_;
  std::size_t k = 0;
  if (side == Side::right) {
    while (k + 1 < ps.size() && t >= ps[k].to) ++k;
  } else {
    while (k + 1 < ps.size() && t > ps[k].to) ++k;
  }
  const Piece& p = ps[k];
  const auto slope = [&](double s) { return partial(p.expr, Variable::t, Bindings{{Variable::t, s}}); };

  const Dual<double> v = value_and_partial(p.expr, Variable::t, Bindings{{Variable::t, t}});

  // Second derivative: five-point stencil on the exact slope with step h/16,
  // kept inside the piece.
  const double lo = std::max(p.from, grid_.start());
  const double hi = std::min(p.to, grid_.b);
  const double step = std::min(grid_.h / 16.0, (hi - lo) / 4.0);
  double ddx;
  if (t - 2 * step >= lo && t + 2 * step <= hi) {
    ddx = (slope(t - 2 * step) - 8 * slope(t - step) + 8 * slope(t + step) - slope(t + 2 * step)) /
          (12 * step);
  } else if (t - 2 * step < lo) {
    const double s0 = std::max(t, lo);
    ddx = (-25 * slope(s0) + 48 * slope(s0 + step) - 36 * slope(s0 + 2 * step) +
           16 * slope(s0 + 3 * step) - 3 * slope(s0 + 4 * step)) /
          (12 * step);
  } else {
    const double s0 = std::min(t, hi);
    ddx = (25 * slope(s0) - 48 * slope(s0 - step) + 36 * slope(s0 - 2 * step) -
           16 * slope(s0 - 3 * step) + 3 * slope(s0 - 4 * step)) /
          (12 * step);
  }
  return {v.value, v.grad, ddx};
}

Trajectory perturb(const Trajectory& traj, int node_index, double delta) {
  const Grid& g = traj.grid();
  if (!traj.is_sampled()) throw Error(ErrorKind::Config, "perturb requires a sampled trajectory");
  if (node_index < 0 || node_index >= g.node_count()) {
    throw Error(ErrorKind::OutOfDomain, "node index out of range");
  }
  if (!g.is_free(node_index)) {
    throw Error(ErrorKind::FixedNode, "node " + std::to_string(node_index) + " is fixed");
  }
  Eigen::VectorXd values = traj.node_values();
  values(node_index) += delta;
  return Trajectory::sampled(g, std::move(values), traj.breakpoint_nodes());
}

}  // namespace herglotz
