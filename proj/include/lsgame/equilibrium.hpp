#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lsgame/types.hpp"

namespace lsgame {

struct BRConfig {
  int max_iterations = 100;
  double improvement_threshold = 1e-10;  // delta: membership slack in cost
  double fixpoint_tolerance = 1e-9;      // membership slack in argument

  void validate() const;
};

struct StepResult {
  ArrivalProfile profile;
  bool changed = false;
  int updates = 0;
  /// Smallest cost decrease among accepted updates (+inf when none).
  double min_improvement = 0.0;
};

struct EquilibriumOutcome {
  ArrivalProfile profile;
  std::vector<double> costs;
  int iterations = 0;  // sweeps run, including the final unchanged one
  bool converged = false;
  bool looped = false;  // a post-sweep profile repeated
  std::uint64_t seed = 0;

  double total() const;
};

struct IterationStats {
  double mean = 0.0;
  int min = 0;
  int max = 0;
};

struct RBRReport {
  int runs = 0;
  int converged_count = 0;
  IterationStats iterations;
  std::vector<EquilibriumOutcome> outcomes;
  std::vector<EquilibriumOutcome> distinct_equilibria;
  double max_profile_distance = 0.0;  // max L1 gap between converged runs
  double max_user_distance = 0.0;     // max per-user gap between converged runs
};

enum class InitialScheme { UniformOrderStat, NormalAroundTarget };

InitialScheme parse_scheme(const std::string& name);
std::string to_string(InitialScheme scheme);

/// Two equilibria are the same when no user's arrival differs by more than
/// this.
inline constexpr double kClusterTolerance = 1e-3;

/// Running maximum: a user choosing an earlier time than a predecessor
/// arrives with that predecessor.
ArrivalProfile clamp_order(std::span<const double> raw);

/// One ordered sweep of best responses over users 1..n.
///
/// User i searches [a_{i-1}, inf) against the already updated predecessors
/// and the previous-sweep successors; the current arrival is kept whenever
/// its cost is within `improvement_threshold` of the best response (or it
/// lies within `fixpoint_tolerance` of a minimizer), otherwise the smallest
/// minimizer is taken.
StepResult br_step(const GameParams& params, const ArrivalProfile& profile,
                   const BRConfig& config = {});

/// Sweeps until nothing changes, a profile repeats, or max_iterations.
EquilibriumOutcome br_run(const GameParams& params, const ArrivalProfile& initial,
                          const BRConfig& config = {}, std::uint64_t seed = 0);

/// br_run from every initial profile, then clustering and distance stats.
/// `seeds`, when given, label the outcomes; otherwise the index is used.
RBRReport rbr(const GameParams& params, std::span<const ArrivalProfile> initials,
              const BRConfig& config = {},
              std::span<const std::uint64_t> seeds = {});

/// Reproducible initial profiles.
///
/// UniformOrderStat: sorted iid U(-1, 1). NormalAroundTarget: per vector a
/// variance v ~ U(0, 2], then a_i ~ N(d_i* - 1/beta, v), clamped to order.
std::vector<ArrivalProfile> generate_initials(const GameParams& params, int count,
                                              InitialScheme scheme,
                                              std::uint64_t seed);

/// First half uniform order statistics, second half normal around target.
std::vector<ArrivalProfile> mixed_initials(const GameParams& params, int count,
                                           std::uint64_t seed);

/// Worst converged total cost over the optimum's total cost.
double price_of_anarchy(const GameParams& params,
                        std::span<const EquilibriumOutcome> equilibria,
                        const ArrivalProfile& optimum);

double l1_distance(const ArrivalProfile& x, const ArrivalProfile& y);
double linf_distance(const ArrivalProfile& x, const ArrivalProfile& y);

}  // namespace lsgame
