#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lsgame/types.hpp"

namespace lsgame {

enum class Objective { OwnCost, TotalCost };

/// Interval of one coordinate on which the objective is u x^2 + v x + w.
struct QuadraticSegment {
  double lo = 0.0;
  double hi = 0.0;
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
  PermutationVector permutation;  // regime of the sorted profile on (lo, hi)
  int position = 0;               // rank of the moving user among arrivals

  double value(double x) const { return (u * x + v) * x + w; }
};

struct BestResponseResult {
  std::vector<double> minimizers;  // ascending, all within 1e-9 of min_cost
  std::vector<double> costs;       // objective at each minimizer
  double min_cost = 0.0;
  int segments_scanned = 0;
};

struct SearchInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Tolerance for reporting several minimizers of one best response.
inline constexpr double kMinimizerTolerance = 1e-9;

/// (d_i - d_i*)^2 + gamma (d_i - a_i) for ordered arrivals.
double user_cost(const GameParams& params, const ArrivalProfile& arrivals,
                 std::size_t user);
double total_cost(const GameParams& params, const ArrivalProfile& arrivals);

/// Per-user costs for arrivals in any order.
std::vector<double> user_costs(const GameParams& params,
                               std::span<const double> arrivals);

/// The objective seen by `user` with the given arrivals (any order).
double objective_value(const GameParams& params,
                       std::span<const double> arrivals, std::size_t user,
                       Objective objective);

/// Default best-response range for `user`: from the predecessor's arrival
/// (or a finite floor for the first user) to a horizon past which the user
/// travels alone and the cost only grows.
SearchInterval search_interval(const GameParams& params,
                               std::span<const double> arrivals,
                               std::size_t user);

/// Tiles [lo, hi] into regimes of constant combined order as a_user moves.
/// The objective is exactly quadratic on each segment; its coefficients come
/// from interpolation through the two endpoints and the midpoint.
std::vector<QuadraticSegment> scan_segments(const GameParams& params,
                                            std::span<const double> arrivals,
                                            std::size_t user,
                                            Objective objective, double lo,
                                            double hi);

/// Best responses of `user` over [a_{user-1}, inf) with all other arrivals
/// fixed. Minimizers within kMinimizerTolerance of the minimum are reported.
BestResponseResult best_response(const GameParams& params,
                                 const ArrivalProfile& arrivals,
                                 std::size_t user);

/// Same search over an explicit interval, arrivals in any order.
/// With `prune` the own-cost scan skips ranges that provably cannot beat the
/// best value found so far.
BestResponseResult best_response_in(const GameParams& params,
                                    std::span<const double> arrivals,
                                    std::size_t user, Objective objective,
                                    double lo, double hi, bool prune = true);

}  // namespace lsgame
