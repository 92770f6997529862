#include "herglotz/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "herglotz/errors.hpp"

namespace herglotz {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::Config, what); }

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> known) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!known.count(key)) config_error(where + ": unknown field \"" + key + "\"");
  }
}

const json& require(const json& obj, const std::string& where, const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) config_error(where + ": missing field \"" + key + "\"");
  return *it;
}

double number(const json& v, const std::string& name) {
  if (!v.is_number()) config_error(name + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) config_error(name + " must be finite");
  return d;
}

double positive(const json& v, const std::string& name) {
  const double d = number(v, name);
  if (!(d > 0.0)) config_error(name + " must be positive");
  return d;
}

int integer(const json& v, const std::string& name) {
  if (!v.is_number_integer()) config_error(name + " must be an integer");
  return v.get<int>();
}

std::string text(const json& v, const std::string& name) {
  if (!v.is_string()) config_error(name + " must be a string");
  return v.get<std::string>();
}

Expression parse_field(const std::string& src, const std::string& field) {
  try {
    return parse(src);
  } catch (const SyntaxError& e) {
    throw SyntaxError(e.kind(), field + ": " + e.detail(), e.offset());
  }
}

SolveOptions parse_solver(const json& s) {
  if (!s.is_object()) config_error("solver must be an object");
  reject_unknown(s, "solver",
                 {"max_iters", "grad_tol", "armijo_c", "shrink", "initial_step", "seed_guess"});
  SolveOptions o;
  if (s.contains("max_iters")) {
    o.max_iters = integer(s["max_iters"], "solver.max_iters");
    if (o.max_iters < 0) config_error("solver.max_iters must be non-negative");
  }
  if (s.contains("grad_tol")) o.grad_tol = positive(s["grad_tol"], "solver.grad_tol");
  if (s.contains("initial_step")) o.initial_step = positive(s["initial_step"], "solver.initial_step");
  for (auto [key, slot] : {std::pair{"armijo_c", &o.armijo_c}, std::pair{"shrink", &o.shrink}}) {
    if (!s.contains(key)) continue;
    *slot = number(s[key], std::string("solver.") + key);
    if (!(*slot > 0.0 && *slot < 1.0)) config_error(std::string("solver.") + key + " must lie in (0, 1)");
  }
  if (s.contains("seed_guess")) {
    const json& g = s["seed_guess"];
    if (g == "linear") {
      o.seed_guess = SolveOptions::Seed::linear;
    } else if (g == "zero") {
      o.seed_guess = SolveOptions::Seed::zero;
    } else if (g.is_array()) {
      o.seed_guess = SolveOptions::Seed::explicit_values;
      o.explicit_values.resize(static_cast<Eigen::Index>(g.size()));
      for (std::size_t k = 0; k < g.size(); ++k)
        o.explicit_values(static_cast<Eigen::Index>(k)) = number(g[k], "solver.seed_guess entry");
    } else {
      config_error("solver.seed_guess must be \"linear\", \"zero\" or an array of numbers");
    }
  }
  return o;
}

TrajectoryConfig parse_trajectory(const json& t) {
  if (!t.is_object()) config_error("trajectory must be an object");
  reject_unknown(t, "trajectory", {"backend", "samples", "pieces"});
  TrajectoryConfig c;
  const std::string backend = text(require(t, "trajectory", "backend"), "trajectory.backend");
  if (backend == "samples") {
    c.backend = TrajectoryConfig::Backend::samples;
    c.samples = text(require(t, "trajectory", "samples"), "trajectory.samples");
  } else if (backend == "pieces") {
    c.backend = TrajectoryConfig::Backend::pieces;
    const json& ps = require(t, "trajectory", "pieces");
    if (!ps.is_array() || ps.empty()) config_error("trajectory.pieces must be a non-empty array");
    for (std::size_t k = 0; k < ps.size(); ++k) {
      const std::string where = "trajectory.pieces[" + std::to_string(k) + "]";
      if (!ps[k].is_object()) config_error(where + " must be an object");
      reject_unknown(ps[k], where, {"from", "to", "expr"});
      c.pieces.push_back({number(require(ps[k], where, "from"), where + ".from"),
                          number(require(ps[k], where, "to"), where + ".to"),
                          text(require(ps[k], where, "expr"), where + ".expr")});
      parse_field(c.pieces.back().expr, where + ".expr");
    }
  } else {
    config_error("trajectory.backend must be \"samples\" or \"pieces\"");
  }
  return c;
}

}  // namespace

ProblemConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) config_error("config must be a JSON object");
  reject_unknown(doc, "config",
                 {"interval", "tau", "n", "gamma", "beta", "history", "lagrangian", "sense",
                  "trajectory", "group", "solver", "tolerance"});
  ProblemConfig c;
  c.base_dir = base_dir;

  const json& iv = require(doc, "config", "interval");
  if (!iv.is_object()) config_error("interval must be an object {a, b}");
  reject_unknown(iv, "interval", {"a", "b"});
  c.a = number(require(iv, "interval", "a"), "interval.a");
  c.b = number(require(iv, "interval", "b"), "interval.b");
  c.tau = number(require(doc, "config", "tau"), "tau");
  c.n = integer(require(doc, "config", "n"), "n");
  c.gamma = number(require(doc, "config", "gamma"), "gamma");
  c.beta = number(require(doc, "config", "beta"), "beta");
  c.history = text(require(doc, "config", "history"), "history");
  c.lagrangian = text(require(doc, "config", "lagrangian"), "lagrangian");
  parse_field(c.history, "history");
  parse_field(c.lagrangian, "lagrangian");

  if (doc.contains("sense")) {
    const std::string s = text(doc["sense"], "sense");
    if (s == "minimize") c.sense = Sense::minimize;
    else if (s == "maximize") c.sense = Sense::maximize;
    else config_error("sense must be \"minimize\" or \"maximize\"");
  }
  if (doc.contains("trajectory")) c.trajectory = parse_trajectory(doc["trajectory"]);
  if (doc.contains("group")) {
    const json& g = doc["group"];
    if (!g.is_object()) config_error("group must be an object {sigma, xi}");
    reject_unknown(g, "group", {"sigma", "xi"});
    c.group = GroupConfig{text(require(g, "group", "sigma"), "group.sigma"),
                          text(require(g, "group", "xi"), "group.xi")};
    parse_field(c.group->sigma, "group.sigma");
    parse_field(c.group->xi, "group.xi");
  }
  if (doc.contains("solver")) c.solver = parse_solver(doc["solver"]);
  if (doc.contains("tolerance")) c.tolerance = positive(doc["tolerance"], "tolerance");

  // Grid alignment is part of validity.
  build_grid(c.a, c.b, c.tau, c.n);
  return c;
}

ProblemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    config_error("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

ordered_json to_json(const ProblemConfig& c) {
  ordered_json j;
  j["interval"] = {{"a", c.a}, {"b", c.b}};
  j["tau"] = c.tau;
  j["n"] = c.n;
  j["gamma"] = c.gamma;
  j["beta"] = c.beta;
  j["history"] = c.history;
  j["lagrangian"] = c.lagrangian;
  j["sense"] = c.sense == Sense::minimize ? "minimize" : "maximize";
  if (c.trajectory) {
    ordered_json t;
    if (c.trajectory->backend == TrajectoryConfig::Backend::samples) {
      t["backend"] = "samples";
      t["samples"] = c.trajectory->samples;
    } else {
      t["backend"] = "pieces";
      t["pieces"] = ordered_json::array();
      for (const auto& p : c.trajectory->pieces)
        t["pieces"].push_back({{"from", p.from}, {"to", p.to}, {"expr", p.expr}});
    }
    j["trajectory"] = t;
  }
  if (c.group) j["group"] = {{"sigma", c.group->sigma}, {"xi", c.group->xi}};
  // Only non-default solver settings are written back.
  const SolveOptions defaults;
  ordered_json s = ordered_json::object();
  const SolveOptions& o = c.solver;
  if (o.max_iters != defaults.max_iters) s["max_iters"] = o.max_iters;
  if (o.grad_tol != defaults.grad_tol) s["grad_tol"] = o.grad_tol;
  if (o.armijo_c != defaults.armijo_c) s["armijo_c"] = o.armijo_c;
  if (o.shrink != defaults.shrink) s["shrink"] = o.shrink;
  if (o.initial_step != defaults.initial_step) s["initial_step"] = o.initial_step;
  if (o.seed_guess == SolveOptions::Seed::zero) {
    s["seed_guess"] = "zero";
  } else if (o.seed_guess == SolveOptions::Seed::explicit_values) {
    s["seed_guess"] = std::vector<double>(o.explicit_values.data(),
                                          o.explicit_values.data() + o.explicit_values.size());
  }
  if (!s.empty()) j["solver"] = s;
  if (c.tolerance) j["tolerance"] = *c.tolerance;
  return j;
}

HerglotzProblem build_problem(const ProblemConfig& c) {
  HerglotzProblem p;
  p.grid = build_grid(c.a, c.b, c.tau, c.n);
  p.gamma = c.gamma;
  p.beta = c.beta;
  p.history = parse_field(c.history, "history");
  p.lagrangian = parse_field(c.lagrangian, "lagrangian");
  p.sense = c.sense;
  validate(p);
  return p;
}

Trajectory build_trajectory(const ProblemConfig& c, const HerglotzProblem& p) {
  if (!c.trajectory) return admissible_trajectory(p, linear_free_values(p));
  if (c.trajectory->backend == TrajectoryConfig::Backend::samples) {
    std::filesystem::path path = c.trajectory->samples;
    if (path.is_relative()) path = c.base_dir / path;
    return read_samples_csv(path, p.grid);
  }
  std::vector<Piece> pieces;
  for (std::size_t k = 0; k < c.trajectory->pieces.size(); ++k) {
    const auto& pc = c.trajectory->pieces[k];
    pieces.push_back({pc.from, pc.to,
                      parse_field(pc.expr, "trajectory.pieces[" + std::to_string(k) + "].expr")});
  }
  return Trajectory::piecewise(p.grid, std::move(pieces));
}

std::optional<SymmetryGroup> build_group(const ProblemConfig& c) {
  if (!c.group) return std::nullopt;
  SymmetryGroup g{parse_field(c.group->sigma, "group.sigma"), parse_field(c.group->xi, "group.xi")};
  validate(g);
  return g;
}

Trajectory read_samples_csv(const std::filesystem::path& path, const Grid& grid) {
  std::ifstream in(path);
  if (!in) config_error("cannot read samples " + path.string());
  std::string line;
  if (!std::getline(in, line)) config_error(path.string() + ": empty samples file");
  if (line.rfind("t,x", 0) != 0) config_error(path.string() + ": header must start with \"t,x\"");

  Eigen::VectorXd values(grid.node_count());
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row >= grid.node_count()) config_error(path.string() + ": more rows than grid nodes");
    std::istringstream ls(line);
    std::string ts, xs;
    std::getline(ls, ts, ',');
    std::getline(ls, xs, ',');
    double t = 0.0, x = 0.0;
    try {
      t = std::stod(ts);
      x = std::stod(xs);
    } catch (const std::exception&) {
      config_error(path.string() + ": bad number on row " + std::to_string(row + 1));
    }
    if (std::abs(t - grid.node(row)) > 1e-9 * grid.h)
      config_error(path.string() + ": row " + std::to_string(row + 1) + " is not at grid node t = " +
                   format_number(grid.node(row)));
    values(row++) = x;
  }
  if (row != grid.node_count())
    config_error(path.string() + ": expected " + std::to_string(grid.node_count()) + " rows, got " +
                 std::to_string(row));
  return Trajectory::sampled(grid, values);
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) config_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) config_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

ordered_json zones_json(const std::vector<ExcludedZone>& zones) {
  ordered_json a = ordered_json::array();
  for (const auto& z : zones) a.push_back({z.from, z.to});
  return a;
}

}  // namespace

std::string residual_csv(const ResidualReport& r) {
  std::string s = "t,residual,excluded\n";
  for (std::size_t k = 0; k < r.t.size(); ++k)
    s += format_number(r.t[k]) + "," + format_number(r.residual[k]) + "," +
         (r.excluded[k] ? "1" : "0") + "\n";
  return s;
}

ordered_json residual_json(const ResidualReport& r) {
  return {{"label", r.label},
          {"sup_norm", r.sup_norm},
          {"sup_at", r.sup_at},
          {"tolerance", r.tolerance},
          {"verdict", r.pass ? "pass" : "fail"},
          {"excluded_zones", zones_json(r.excluded_zones)}};
}

std::string conservation_csv(const ConservationReport& r) {
  std::string s = "t,Q,interval_label\n";
  for (const auto& p : r.profiles)
    for (std::size_t k = 0; k < p.t.size(); ++k)
      s += format_number(p.t[k]) + "," + format_number(p.q[k]) + "," + p.label + "\n";
  return s;
}

ordered_json conservation_json(const ConservationReport& r) {
  ordered_json a = ordered_json::array();
  for (const auto& p : r.profiles)
    a.push_back({{"label", p.label},
                 {"mean", p.mean},
                 {"drift", p.drift},
                 {"tolerance", p.tolerance},
                 {"verdict", p.pass ? "pass" : "fail"},
                 {"excluded_zones", zones_json(p.excluded_zones)}});
  return {{"profiles", a}, {"verdict", r.pass ? "pass" : "fail"}};
}

std::string trajectory_csv(const Trajectory& traj) {
  const Grid& g = traj.grid();
  std::string s = "t,x,dx,ddx\n";
  for (int i = 0; i < g.node_count(); ++i) {
    const double t = g.node(i);
    const TrajectoryState x = traj.eval(t);
    s += format_number(t) + "," + format_number(x.x) + "," + format_number(x.dx) + "," +
         format_number(x.ddx) + "\n";
  }
  return s;
}

std::string zpath_csv(const ZPath& path) {
  const Grid& g = path.grid();
  std::string s = "t,z,lambda\n";
  for (int k = 0; k <= g.n; ++k)
    s += format_number(g.node(g.m + k)) + "," + format_number(path.z()(k)) + "," +
         format_number(path.lambda()(k)) + "\n";
  return s;
}

ordered_json solve_json(const SolveResult& r) {
  return {{"z_b", r.z_b},
          {"iterations", r.iterations},
          {"final_grad_norm", r.final_grad_norm},
          {"converged", r.converged},
          {"message", r.message},
          {"objective_history", r.objective_history}};
}

ordered_json verdict_json(const NoetherVerdict& v) {
  return {{"verdict", v.pass ? "pass" : "fail"},
          {"failed_premise", v.failed_premise},
          {"premises",
           {residual_json(v.el1), residual_json(v.el2), residual_json(v.h1), residual_json(v.h2),
            residual_json(v.invariance)}},
          {"conservation", conservation_json(v.conservation)}};
}

}  // namespace herglotz
