#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "lsgame/equilibrium.hpp"
#include "lsgame/social.hpp"
#include "lsgame/types.hpp"

namespace lsgame {

/// The i/(n+1) quantiles, i = 1..n, of normal(mean, variance).
std::vector<double> quantile_targets(int n, double mean, double variance);

/// Expands a "params" object. alpha and gamma may be numbers or the rules
/// {"beta_over_n": f} (alpha = f beta / n) and {"over_n": f} (gamma = f / n);
/// d_star is a list or {"normal_quantiles": {"mean": m, "variance": v}}.
GameParams parse_params(const nlohmann::json& j);

struct ExperimentConfig {
  GameParams params;
  BRConfig br;
  int runs = 100;
  /// "table1" (half uniform order statistics, half normal around target),
  /// "uniform-order-stat" or "normal-around-target".
  std::string scheme = "table1";
  std::uint64_t seed = 0;
  std::string optimum = "none";  // none | auto | exhaustive | heuristic
  int restarts = 4;
  std::set<std::string> outputs{"table1-summary"};

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
};

/// Reads and parses a JSON file; the error names the path.
nlohmann::json read_json_file(const std::filesystem::path& path);

struct ScheduleRow {
  int user = 0;  // 1-based
  double a = 0.0;
  double d = 0.0;
  double d_star = 0.0;
  double sojourn = 0.0;
  double cost = 0.0;
};

std::vector<ScheduleRow> schedule_rows(const GameParams& params,
                                       const ArrivalProfile& arrivals);

struct CostSplit {
  double total = 0.0;
  double deviation_avg = 0.0;  // mean of (d_i - d_i*)^2
  double travel_avg = 0.0;     // mean of gamma (d_i - a_i)
};

CostSplit cost_split(const GameParams& params, const ArrivalProfile& arrivals);

struct RunArtifacts {
  RBRReport report;
  /// Worst converged equilibrium (the first run when none converged).
  ArrivalProfile equilibrium;
  std::optional<OptimumResult> optimum;
  std::vector<ScheduleRow> eq_schedule;
  std::vector<ScheduleRow> opt_schedule;
  SystemTrajectory eq_trajectory;
  SystemTrajectory opt_trajectory;
  nlohmann::json summary;
};

RunArtifacts run_experiment(const ExperimentConfig& config);

/// CSV writers; numbers carry 9 significant digits.
void write_schedule_csv(std::ostream& out, const std::vector<ScheduleRow>& rows);
void write_trajectory_csv(std::ostream& out, const SystemTrajectory& trajectory);
std::string format_number(double x);

/// Writes summary.json plus the requested CSV files into `dir`; returns the
/// paths written.
std::vector<std::filesystem::path> write_artifacts(const RunArtifacts& artifacts,
                                                   const ExperimentConfig& config,
                                                   const std::filesystem::path& dir);

}  // namespace lsgame
