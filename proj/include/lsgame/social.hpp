#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lsgame/types.hpp"

namespace lsgame {

struct WithinResult {
  ArrivalProfile profile;
  double total = 0.0;
};

/// Minimum total cost over ordered profiles realizing the regime `k`.
///
/// With k fixed the departures are affine in the arrivals (d = M a + c), so
/// this is a convex QP over the ordering and interleaving constraints
///   a_i <= a_{i+1},  a_{k_i} <= d_i,  d_i <= a_{k_i + 1}.
/// Returns nullopt when no profile realizes k.
std::optional<WithinResult> optimize_within_permutation(const GameParams& params,
                                                        const PermutationVector& k);

struct PermutationCertificate {
  PermutationVector permutation;
  std::optional<double> total;  // nullopt: regime infeasible
};

struct OptimumResult {
  ArrivalProfile profile;
  double total = 0.0;
  std::string method;  // "exhaustive" or "heuristic"
  PermutationVector permutation;
  std::vector<PermutationCertificate> certificates;  // exhaustive only
};

/// Global optimum by solving the QP of every regime; n <= cap.
OptimumResult exhaustive_optimum(const GameParams& params, int cap = 8);

/// Local search for larger n: coordinate descent on the total cost (each
/// user moved within [a_{i-1}, a_{i+1}]) alternated with the exact QP of the
/// regime reached, from `restarts` starting profiles. Not certified optimal.
OptimumResult heuristic_optimum(const GameParams& params, int restarts = 4,
                                std::uint64_t seed = 0);

/// exhaustive_optimum when n <= cap, otherwise heuristic_optimum.
OptimumResult social_optimum(const GameParams& params, int restarts = 4,
                             std::uint64_t seed = 0, int cap = 8);

}  // namespace lsgame
