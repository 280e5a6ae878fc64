#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsgame {

/// Raised when inputs violate a documented precondition.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine fails an internal guarantee.
class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Event-coincidence tolerance used when classifying a_j against d_i.
inline constexpr double kEventTolerance = 1e-12;

/// Parameters of the arrival game on a unit-length segment.
///
/// Speed with q users present is beta - alpha * (q - 1); each user pays
/// (d_i - d_star_i)^2 + gamma * (d_i - a_i).
struct GameParams {
  int n = 1;
  double beta = 1.0;
  double alpha = 0.0;
  double gamma = 0.0;
  std::vector<double> d_star;

  /// Throws InvalidInput unless beta > 0, alpha >= 0, gamma >= 0,
  /// beta - alpha (n - 1) > 0 and d_star is non-decreasing of length n.
  void validate() const;

  double free_flow_time() const { return 1.0 / beta; }
  /// Sojourn when all n users travel together for the whole trip.
  double slowest_sojourn() const { return 1.0 / (beta - alpha * (n - 1)); }

  /// Copy with every desired time shifted by `delta`.
  GameParams shifted(double delta) const;

  static GameParams make(double beta, double alpha, double gamma,
                         std::vector<double> d_star);
};

/// Ordered arrival times, one per user.
struct ArrivalProfile {
  std::vector<double> times;

  std::size_t size() const { return times.size(); }
  double operator[](std::size_t i) const { return times[i]; }
  bool ordered() const;
};

/// Departure times, one per user (same indexing as the arrivals).
struct DepartureProfile {
  std::vector<double> times;

  std::size_t size() const { return times.size(); }
  double operator[](std::size_t i) const { return times[i]; }
};

/// Combined interleaving of arrivals and departures.
///
/// Stored 1-based to match the usual notation: k[i-1] is the index of the
/// last arrival not after d_i and h[i-1] the first user departing not
/// before a_i. Hence k.back() == n, i <= k_i <= n and h_i <= i.
struct PermutationVector {
  std::vector<int> k;
  std::vector<int> h;

  bool operator==(const PermutationVector&) const = default;
  std::string to_string() const;

  /// h is determined by k: h_i = min{ j : k_j >= i }.
  static PermutationVector from_k(std::vector<int> k);
};

/// Step function of the number of users in the system.
struct TrajectoryEvent {
  double t;
  int q;  // queue size just after the event
  bool arrival;
  int user;  // 0-based
};

struct SystemTrajectory {
  std::vector<TrajectoryEvent> events;

  int peak() const;
};

}  // namespace lsgame
