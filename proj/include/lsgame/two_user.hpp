#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lsgame/types.hpp"

namespace lsgame::two_user {

// Closed-form solutions for two users with a common desired departure time.
// Every routine solves the game at d* = (0, 0) and shifts the answer by the
// common d*; unequal desired times are rejected.

/// Quadratic programs of the two-user game.
///
/// User 2's cost on the overlap region a1 <= x <= a1 + 1/beta is
/// U x^2 + V x + const with unconstrained minimizer X; Y is the matching
/// minimizer of user 1's overlap cost a2 - 1/beta <= x <= a2.
struct TwoUserQP {
  double U = 0.0;
  double V = 0.0;
  double X = 0.0;  // NaN when linear
  double Y = 0.0;
  bool linear = false;  // alpha >= beta / 2: x*(a) := a + 1/beta
};

TwoUserQP quadratic_programs(const GameParams& params, double a1, double a2);

/// Best responses of user 2 to a1 (two entries when gamma = 0 admits two
/// zero-cost arrivals).
std::vector<double> br2(const GameParams& params, double a1);

/// Best response of user 1 to a2, over a1 <= a2.
double br1(const GameParams& params, double a2);

struct ArrivalPair {
  double a1 = 0.0;
  double a2 = 0.0;
};

struct EquilibriumSet2 {
  enum class Kind { UniquePoint, TwoPoints, IntervalFamily };

  Kind kind = Kind::UniquePoint;
  std::vector<ArrivalPair> points;
  /// a2 range of the family a1 = a2 - 1/beta (IntervalFamily only).
  std::optional<std::pair<double, double>> interval;
  double free_flow_time = 1.0;

  /// Points for IntervalFamily are `count` evenly spaced members.
  std::vector<ArrivalPair> members(int count = 20) const;
};

std::string to_string(EquilibriumSet2::Kind kind);

/// Realized subgame-perfect equilibrium paths (user 2 plays br2).
EquilibriumSet2 spne(const GameParams& params);

/// All Cournot-Nash equilibria.
EquilibriumSet2 cne(const GameParams& params);

}  // namespace lsgame::two_user
