#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "herglotz/conditions.hpp"
#include "herglotz/integrate.hpp"
#include "herglotz/noether.hpp"
#include "herglotz/problem.hpp"
#include "herglotz/solver.hpp"

namespace herglotz {

struct PieceConfig {
  double from = 0.0;
  double to = 0.0;
  std::string expr;
};

struct TrajectoryConfig {
  enum class Backend { samples, pieces };
  Backend backend = Backend::pieces;
  std::string samples;  // CSV path, relative to the config file
  std::vector<PieceConfig> pieces;
};

struct GroupConfig {
  std::string sigma;
  std::string xi;
};

/// A problem definition file (see schema/problem.schema.json).
struct ProblemConfig {
  double a = 0.0;
  double b = 1.0;
  double tau = 0.0;
  int n = 2;
  double gamma = 0.0;
  double beta = 0.0;
  std::string history;
  std::string lagrangian;
  Sense sense = Sense::minimize;
  std::optional<TrajectoryConfig> trajectory;
  std::optional<GroupConfig> group;
  SolveOptions solver;
  std::optional<double> tolerance;
  std::filesystem::path base_dir;
};

/// Validates the document against the schema rules and returns the config.
/// Throws Config (structural problems) or SyntaxError (expression strings,
/// with the offending field prefixed to the message).
ProblemConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ProblemConfig load_config(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const ProblemConfig& config);

HerglotzProblem build_problem(const ProblemConfig& config);

/// The configured trajectory, or the sampled straight-line guess when none.
Trajectory build_trajectory(const ProblemConfig& config, const HerglotzProblem& problem);

std::optional<SymmetryGroup> build_group(const ProblemConfig& config);

/// Reads a "t,x" CSV with one row per grid node.
Trajectory read_samples_csv(const std::filesystem::path& path, const Grid& grid);

/// 17 significant digits, shortest exponent form ("%.17g").
std::string format_number(double v);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string residual_csv(const ResidualReport& r);
nlohmann::ordered_json residual_json(const ResidualReport& r);

std::string conservation_csv(const ConservationReport& r);
nlohmann::ordered_json conservation_json(const ConservationReport& r);

/// t, x, dx, ddx at every grid node.
std::string trajectory_csv(const Trajectory& traj);

/// t, z, lambda at the grid nodes of [a, b].
std::string zpath_csv(const ZPath& path);

nlohmann::ordered_json solve_json(const SolveResult& r);

nlohmann::ordered_json verdict_json(const NoetherVerdict& v);

}  // namespace herglotz
