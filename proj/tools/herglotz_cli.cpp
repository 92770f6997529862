// Batch front end: herglotz <command> [config.json | --bundle NAME] [--out DIR] [--n N] [--tol T]
//
// Exit codes: 0 all verdicts pass, 1 a check failed its tolerance,
// 2 configuration or parse error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "herglotz/bundles.hpp"
#include "herglotz/conditions.hpp"
#include "herglotz/errors.hpp"
#include "herglotz/integrate.hpp"
#include "herglotz/io.hpp"
#include "herglotz/noether.hpp"
#include "herglotz/solver.hpp"

namespace fs = std::filesystem;
using namespace herglotz;
using nlohmann::ordered_json;

namespace {

constexpr double kDefaultTolerance = 1e-6;

struct Flags {
  std::string command;
  std::string config;
  std::string bundle;
  std::string out = "out";
  std::optional<int> n;
  std::optional<double> tol;
};

struct Context {
  ProblemConfig config;
  HerglotzProblem problem;
  double tol;
  fs::path out;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void print(const ResidualReport& r) {
  std::cout << r.label << ": sup_norm=" << num(r.sup_norm) << " at t=" << num(r.sup_at)
            << " tol=" << num(r.tolerance) << " " << (r.pass ? "PASS" : "FAIL") << "\n";
}

void print(const QuantityProfile& p) {
  std::cout << p.label << ": mean=" << num(p.mean) << " drift=" << num(p.drift)
            << " tol=" << num(p.tolerance) << " " << (p.pass ? "PASS" : "FAIL") << "\n";
}

void write_json(const fs::path& path, const ordered_json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

Context load(const Flags& f) {
  Context c;
  if (!f.bundle.empty()) {
    if (!f.config.empty()) throw Error(ErrorKind::Config, "give either a config path or --bundle, not both");
    c.config = find_bundle(f.bundle).config;
  } else if (!f.config.empty()) {
    c.config = load_config(f.config);
  } else {
    throw Error(ErrorKind::Config, f.command + " needs a config path or --bundle NAME");
  }
  if (f.n) {
    if (c.config.trajectory && c.config.trajectory->backend == TrajectoryConfig::Backend::samples)
      throw Error(ErrorKind::Config, "--n cannot resample a trajectory given as samples");
    c.config.n = *f.n;
  }
  c.problem = build_problem(c.config);
  c.tol = f.tol ? *f.tol : c.config.tolerance.value_or(kDefaultTolerance);
  c.out = f.out;
  return c;
}

SymmetryGroup require_group(const Context& c, const std::string& command) {
  std::optional<SymmetryGroup> g = build_group(c.config);
  if (!g) throw Error(ErrorKind::Config, command + " needs a \"group\" {sigma, xi} in the config");
  return *g;
}

int cmd_integrate(const Context& c) {
  const Trajectory traj = build_trajectory(c.config, c.problem);
  const ZPath path = integrate_z(c.problem, traj);
  write_file_atomic(c.out / "trajectory.csv", trajectory_csv(traj));
  write_file_atomic(c.out / "zpath.csv", zpath_csv(path));
  write_json(c.out / "integrate.json",
             {{"z_b", path.z_end()}, {"lambda_b", path.lambda()(path.lambda().size() - 1)}});
  std::cout << "z(b)=" << num(path.z_end()) << " lambda(b)=" << num(path.lambda()(path.lambda().size() - 1))
            << "\n";
  return 0;
}

int report_pair(const Context& c, const std::pair<ResidualReport, ResidualReport>& rs,
                const std::string& stem) {
  write_file_atomic(c.out / (stem + "1.csv"), residual_csv(rs.first));
  write_file_atomic(c.out / (stem + "2.csv"), residual_csv(rs.second));
  write_json(c.out / (stem + ".json"),
             {{"reports", {residual_json(rs.first), residual_json(rs.second)}}});
  print(rs.first);
  print(rs.second);
  return rs.first.pass && rs.second.pass ? 0 : 1;
}

int cmd_check_el(const Context& c) {
  const Trajectory traj = build_trajectory(c.config, c.problem);
  const ZPath path = integrate_z(c.problem, traj);
  return report_pair(c, el_residuals(c.problem, traj, path, c.tol), "el");
}

int cmd_check_dbr(const Context& c) {
  const Trajectory traj = build_trajectory(c.config, c.problem);
  const ZPath path = integrate_z(c.problem, traj);
  return report_pair(c, dbr_residuals(c.problem, traj, path, c.tol), "dbr");
}

int cmd_check_hyp(const Context& c) {
  const Trajectory traj = build_trajectory(c.config, c.problem);
  const ZPath path = integrate_z(c.problem, traj);
  const std::optional<SymmetryGroup> group = build_group(c.config);
  const HypothesisReports h =
      hypothesis_profiles(c.problem, traj, path, group ? &*group : nullptr, c.tol);
  ordered_json reports = {residual_json(h.extremal)};
  write_file_atomic(c.out / "hyp_extremal.csv", residual_csv(h.extremal));
  print(h.extremal);
  bool pass = h.extremal.pass;
  if (h.noether) {
    write_file_atomic(c.out / "hyp_noether.csv", residual_csv(*h.noether));
    reports.push_back(residual_json(*h.noether));
    print(*h.noether);
    pass = pass && h.noether->pass;
  }
  write_json(c.out / "hyp.json", {{"reports", reports}});
  return pass ? 0 : 1;
}

int cmd_invariance(const Context& c) {
  const SymmetryGroup group = require_group(c, "invariance");
  const Trajectory traj = build_trajectory(c.config, c.problem);
  const ZPath path = integrate_z(c.problem, traj);
  const ResidualReport h = group_variation(c.problem, traj, path, group, c.tol);
  write_file_atomic(c.out / "invariance.csv", residual_csv(h));
  write_json(c.out / "invariance.json", residual_json(h));
  print(h);
  return h.pass ? 0 : 1;
}

int cmd_noether(const Context& c) {
  const SymmetryGroup group = require_group(c, "noether");
  const Trajectory traj = build_trajectory(c.config, c.problem);
  const ZPath path = integrate_z(c.problem, traj);
  const NoetherVerdict v = check_noether(c.problem, traj, path, group, NoetherTolerances(c.tol));
  write_file_atomic(c.out / "conservation.csv", conservation_csv(v.conservation));
  write_json(c.out / "noether.json", verdict_json(v));
  for (const auto& p : v.conservation.profiles) print(p);
  std::cout << "noether: " << (v.pass ? "PASS" : "FAIL (" + v.failed_premise + ")") << "\n";
  return v.pass ? 0 : 1;
}

int cmd_solve(const Context& c) {
  SolveOptions opts = c.config.solver;
  const SolveResult r = solve_direct(c.problem, opts);
  const ZPath path = integrate_z(c.problem, r.trajectory);
  write_file_atomic(c.out / "solution.csv", trajectory_csv(r.trajectory));
  write_file_atomic(c.out / "zpath.csv", zpath_csv(path));
  write_json(c.out / "solve.json", solve_json(r));
  std::cout << "solve: z(b)=" << num(r.z_b) << " iterations=" << r.iterations
            << " grad_norm=" << num(r.final_grad_norm) << " " << (r.converged ? "CONVERGED" : "NOT CONVERGED")
            << " (" << r.message << ")\n";
  return r.converged ? 0 : 1;
}

int cmd_paper_example(const Flags& f) {
  Flags g = f;
  if (!g.config.empty()) throw Error(ErrorKind::Config, "paper-example takes no config");
  g.bundle = "paper-s4";
  Context c = load(g);
  // Without --tol, each check uses the tolerance its reference value is known to.
  const auto tol_or = [&](double t) { return f.tol ? *f.tol : t; };

  const Trajectory traj = build_trajectory(c.config, c.problem);
  const ZPath path = integrate_z(c.problem, traj);
  const SymmetryGroup group = *build_group(c.config);
  const double e = std::exp(1.0);

  double lambda_err = 0.0;
  const Grid& grid = c.problem.grid;
  for (int k = 0; k <= grid.n; ++k) {
    const double t = grid.node(grid.m + k);
    lambda_err = std::max(lambda_err, std::abs(path.lambda()(k) - std::exp(-t)));
  }
  const double z_err = std::abs(path.z_end() - (e * e - e));
  const double z1_err = std::abs(path.z_at(1.0) - (e - 1.0));
  const bool values_pass = z_err <= tol_or(1e-8) && z1_err <= tol_or(1e-8) && lambda_err <= tol_or(1e-8);

  auto el = el_residuals(c.problem, traj, path, tol_or(1e-4));
  el.second.tolerance = tol_or(1e-10);
  el.second.pass = el.second.sup_norm <= el.second.tolerance;
  const auto dbr = dbr_residuals(c.problem, traj, path, tol_or(1e-4));
  const HypothesisReports hyp = hypothesis_profiles(c.problem, traj, path, &group, tol_or(1e-6));
  const ResidualReport inv = group_variation(c.problem, traj, path, group, tol_or(1e-8));
  ConservationReport q = conserved_quantities(c.problem, traj, path, group, tol_or(1e-6));
  const double targets[2] = {1.0, 1.0 - 1.0 / e};
  bool means_pass = true;
  for (std::size_t k = 0; k < q.profiles.size() && k < 2; ++k)
    means_pass = means_pass && std::abs(q.profiles[k].mean - targets[k]) <= tol_or(1e-6);

  std::printf("z(2)=%.12f (e^2-e=%.12f, error %.3g)\n", path.z_end(), e * e - e, z_err);
  std::printf("z(1)=%.12f (e-1=%.12f, error %.3g)\n", path.z_at(1.0), e - 1.0, z1_err);
  std::printf("max |lambda(t)-exp(-t)| = %.3g\n", lambda_err);
  for (const ResidualReport* r : std::initializer_list<const ResidualReport*>{
           &el.first, &el.second, &dbr.first, &hyp.extremal, &*hyp.noether, &inv})
    print(*r);
  for (const auto& p : q.profiles) print(p);

  write_file_atomic(c.out / "zpath.csv", zpath_csv(path));
  write_file_atomic(c.out / "trajectory.csv", trajectory_csv(traj));
  write_file_atomic(c.out / "conservation.csv", conservation_csv(q));
  write_json(c.out / "paper_example.json",
             {{"n", grid.n},
              {"z_b", path.z_end()},
              {"z_at_1", path.z_at(1.0)},
              {"lambda_max_error", lambda_err},
              {"reports",
               {residual_json(el.first), residual_json(el.second), residual_json(dbr.first),
                residual_json(hyp.extremal), residual_json(*hyp.noether), residual_json(inv)}},
              {"conservation", conservation_json(q)}});

  const bool pass = values_pass && means_pass && el.first.pass && el.second.pass && dbr.first.pass &&
                    hyp.extremal.pass && hyp.noether->pass && inv.pass && q.pass;
  std::cout << "paper-example: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 1;
}

int run(const Flags& f) {
  if (f.command == "paper-example") return cmd_paper_example(f);
  const Context c = load(f);
  if (f.command == "integrate") return cmd_integrate(c);
  if (f.command == "check-el") return cmd_check_el(c);
  if (f.command == "check-dbr") return cmd_check_dbr(c);
  if (f.command == "check-hyp") return cmd_check_hyp(c);
  if (f.command == "invariance") return cmd_invariance(c);
  if (f.command == "noether") return cmd_noether(c);
  if (f.command == "solve") return cmd_solve(c);
  throw Error(ErrorKind::Config, "unknown command " + f.command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Herglotz variational problems with time delay"};
  Flags f;
  app.add_option("command", f.command, "integrate | check-el | check-dbr | check-hyp | invariance | noether | solve | paper-example")
      ->required()
      ->check(CLI::IsMember({"integrate", "check-el", "check-dbr", "check-hyp", "invariance",
                             "noether", "solve", "paper-example"}));
  app.add_option("config", f.config, "problem definition (JSON)");
  app.add_option("--bundle", f.bundle, "use a bundled problem instead of a config file");
  app.add_option("--out", f.out, "directory for reports")->capture_default_str();
  app.add_option("--n", f.n, "override the number of intervals on [a, b]");
  app.add_option("--tol", f.tol, "override the verdict tolerance");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run(f);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return e.is_configuration_error() ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
