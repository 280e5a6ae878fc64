#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lsgame/types.hpp"

namespace lsgame {

/// Exact departures for ordered arrivals.
///
/// Builds d_1..d_n in index order from the recursive formula
///
///   d_i = (1 + (beta - alpha (i - h_i)) a_i
///            + alpha (sum_{j=h_i}^{i-1} d_j - sum_{j=i+1}^{k_i} a_j))
///         / (beta - alpha (k_i - i)),
///
/// where h_i follows from the departures already known and k_i is advanced
/// while the next arrival does not come after the tentative d_i. Every
/// advance of k and every new user costs one evaluation, so a solve takes at
/// most 2n of them; more than 4n raises SolverError.
DepartureProfile solve_departures(const GameParams& params,
                                  const ArrivalProfile& arrivals);

/// Departures for arrivals in any order (users re-sorted by arrival, ties
/// by index). Used when a single user is moved past others.
std::vector<double> departures_unordered(const GameParams& params,
                                         std::span<const double> arrivals);

PermutationVector permutation_of(const GameParams& params,
                                 const ArrivalProfile& arrivals,
                                 const DepartureProfile& departures);

/// All k with k_n = n, k non-decreasing and k_i >= i. There are
/// Catalan(n) of them.
std::vector<PermutationVector> enumerate_permutations(int n, int cap = 10);

/// Catalan(n) = C(2n, n) / (n + 1).
unsigned long long catalan(int n);

/// Max over users of |integral of the speed over [a_i, d_i] - 1|.
///
/// The speed is integrated exactly over the piecewise-constant occupancy
/// implied by the given pair, so this is independent of solve_departures.
/// The integral is a finite sum; `quadrature_step` only has to be >= 0.
double verify_dynamics(const GameParams& params, const ArrivalProfile& arrivals,
                       const DepartureProfile& departures,
                       double quadrature_step = 0.0);

/// Merged arrival/departure events with the running queue size. At equal
/// times arrivals are processed before departures (closed intervals).
SystemTrajectory queue_trajectory(const ArrivalProfile& arrivals,
                                  const DepartureProfile& departures);

/// Occupancy (beta + alpha) / (2 alpha) at which q * speed peaks.
double throughput_peak(const GameParams& params);

namespace detail {

/// Core recursion on sorted arrivals. k and h are 0-based (k[i] is the last
/// arrival index <= d[i], h[i] the first user with d >= a[i]). Returns the
/// number of formula evaluations.
int solve_sorted(double beta, double alpha, std::span<const double> a,
                 std::span<double> d, std::span<int> k, std::span<int> h);

/// d(departure_j)/d(a_moving) for the regime fixed by k and h.
void slopes_sorted(double beta, double alpha, std::span<const int> k,
                   std::span<const int> h, std::size_t moving,
                   std::span<double> slope);

}  // namespace detail

}  // namespace lsgame
