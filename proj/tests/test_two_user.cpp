#include <doctest.h>

#include <cmath>

#include "lsgame/cost.hpp"
#include "lsgame/dynamics.hpp"
#include "lsgame/two_user.hpp"
#include "oracles.hpp"

using namespace lsgame;
using namespace lsgame::two_user;

namespace {

GameParams game(double alpha, double gamma, double target = 0.0) {
  return GameParams::make(1.0, alpha, gamma, {target, target});
}

// Numeric best response of user 2 (any a2) and of user 1 (a1 <= a2).
double numeric_br2(const GameParams& p, double a1) {
  return best_response(p, {{a1, a1}}, 1).minimizers.front();
}

BestResponseResult numeric_br1(const GameParams& p, double a2) {
  const std::vector<double> a{a2, a2};
  const auto range = search_interval(p, a, 0);
  return best_response_in(p, a, 0, Objective::OwnCost, range.lo, a2);
}

bool mutual(const GameParams& p, double a1, double a2, double tol) {
  const std::vector<double> a{a1, a2};
  const auto c = user_costs(p, a);
  const auto b2 = best_response(p, {{a1, a2}}, 1);
  const auto b1 = numeric_br1(p, a2);
  return c[1] <= b2.min_cost + tol && c[0] <= b1.min_cost + tol;
}

}  // namespace

TEST_SUITE("two_user") {

TEST_CASE("quadratic program quantities") {
  const auto q = quadratic_programs(game(0.2, 1.0), -1.0, -0.5);
  CHECK(q.U == doctest::Approx(std::pow(0.6 / 0.8, 2)));
  CHECK(q.X == doctest::Approx(-q.V / (2.0 * q.U)));
  CHECK_FALSE(q.linear);
  const auto half = quadratic_programs(game(0.5, 1.0), -1.0, -0.5);
  CHECK(half.U == 0.0);
  CHECK(half.linear);
  CHECK(std::isnan(half.X));
  // Y for user 1's overlap program at a2 = -0.5.
  CHECK(q.Y == doctest::Approx(-(2.0 * (1.0 + 0.2 * 0.5) + 1.0 * 0.2 * 0.8) / 2.0));
}

TEST_CASE("br2 examples") {
  CHECK(br2(game(0.2, 1.0), -3.0) == std::vector<double>{-1.0});
  const auto two = br2(game(0.6, 0.0), -2.25);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == doctest::Approx(-1.75));
  CHECK(two[1] == doctest::Approx(-1.0));
  // At a1 = -1.5 the overlap point is the only zero-cost arrival.
  const auto one = br2(game(0.6, 0.0), -1.5);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == doctest::Approx(-0.5));
  const auto p = game(0.2, 1.0);
  CHECK(br2(p, -1.25).front() == doctest::Approx(numeric_br2(p, -1.25)).epsilon(1e-8));
}

TEST_CASE("br1 examples") {
  CHECK(br1(game(0.2, 1.0), 0.5) == doctest::Approx(-1.0));
  CHECK(br1(game(0.2, 0.0), -1.25) == doctest::Approx(0.2 * -1.25 - 1.0));
  CHECK(br1(game(0.2, 1.0), -0.05) == doctest::Approx(-1.05));
}

TEST_CASE("closed-form best responses match the numeric scan") {
  for (double alpha : {0.1, 0.3, 0.5, 0.7}) {
    for (double gamma : {0.0, 0.5, 2.0}) {
      const auto p = game(alpha, gamma);
      for (int s = 0; s <= 60; ++s) {
        const double x = -3.0 + 3.5 * s / 60.0;
        const auto closed2 = br2(p, x);
        const auto num2 = best_response(p, {{x, x}}, 1);
        const std::vector<double> prof{x, closed2.front()};
        CHECK(user_costs(p, prof)[1] == doctest::Approx(num2.min_cost).epsilon(1e-8));
        const double closed1 = br1(p, x);
        const auto num1 = numeric_br1(p, x);
        const std::vector<double> prof1{closed1, x};
        CHECK(user_costs(p, prof1)[0] == doctest::Approx(num1.min_cost).epsilon(1e-8));
        double gap = 1e9;
        for (double m : num1.minimizers) gap = std::min(gap, std::abs(m - closed1));
        CHECK(gap <= 1e-6);
      }
    }
  }
}

TEST_CASE("SPNE examples") {
  const auto s = spne(game(0.6, 2.0));
  REQUIRE(s.points.size() == 1);
  CHECK(s.points[0].a1 == doctest::Approx(-1.0));
  CHECK(s.points[0].a2 == doctest::Approx(0.0));
  const auto c = user_costs(game(0.6, 2.0), std::vector<double>{-1.0, 0.0});
  CHECK(c[0] == 2.0);
  CHECK(c[1] == 3.0);

  const auto t = spne(game(0.6, 0.0));
  CHECK(t.kind == EquilibriumSet2::Kind::TwoPoints);
  REQUIRE(t.points.size() == 2);
  CHECK(t.points[0].a1 == doctest::Approx(-2.5));
  CHECK(t.points[0].a2 == doctest::Approx(-2.5));
  CHECK(t.points[1].a1 == doctest::Approx(-1.0));
  CHECK(t.points[1].a2 == doctest::Approx(0.0));

  const auto p = game(0.2, 1.0);
  const auto u = spne(p);
  REQUIRE(u.points.size() == 1);
  CHECK(u.points[0].a1 == doctest::Approx(-1.302).epsilon(1e-3));
  CHECK(u.points[0].a2 == doctest::Approx(-1.0104).epsilon(1e-3));
  // Leader's value against a brute-force search over the follower's reply.
  const oracle::Game og{1.0, 0.2, 1.0, {0.0, 0.0}};
  const auto leader = oracle::grid_minimize(
      [&](double a) { return oracle::cost(og, {a, br2(p, a).front()}, 0); }, -2.0, 0.0, 1e-3);
  const auto mine = user_costs(p, std::vector<double>{u.points[0].a1, u.points[0].a2});
  CHECK(mine[0] == doctest::Approx(leader.value).epsilon(1e-8));
}

TEST_CASE("CNE examples") {
  const auto a = cne(game(0.2, 1.0));
  REQUIRE(a.points.size() == 1);
  CHECK(a.points[0].a1 == doctest::Approx(-1.2833333333).epsilon(1e-9));
  CHECK(a.points[0].a2 == doctest::Approx(-1.0166666667).epsilon(1e-9));
  const auto b = cne(game(0.2, 0.0));
  CHECK(b.kind == EquilibriumSet2::Kind::UniquePoint);
  CHECK(b.points[0].a1 == doctest::Approx(-1.25));
  CHECK(b.points[0].a2 == doctest::Approx(-1.25));
  const auto c = cne(game(0.6, 1.0));
  CHECK(c.kind == EquilibriumSet2::Kind::IntervalFamily);
  REQUIRE(c.interval);
  CHECK(c.interval->first == doctest::Approx(-0.3));
  CHECK(c.interval->second == doctest::Approx(0.0));
}

TEST_CASE("every CNE is a mutual best response") {
  for (double alpha : {0.05, 0.2, 0.35, 0.5, 0.6, 0.8}) {
    for (double gamma : {0.0, 0.3, 1.0, 2.5, 6.0}) {
      const auto p = game(alpha, gamma);
      const auto set = cne(p);
      for (const auto& pt : set.members(20)) {
        CHECK_MESSAGE(mutual(p, pt.a1, pt.a2, 1e-8),
                      "alpha=" << alpha << " gamma=" << gamma << " at (" << pt.a1 << ", "
                               << pt.a2 << ")");
        const auto d = solve_departures(p, {{pt.a1, pt.a2}});
        CHECK(d[1] - pt.a2 == doctest::Approx(d[0] - pt.a1).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("interior CNE meets the interval family at the threshold") {
  const double alpha = 0.2;
  const double star = (1.0 - 2.0 * alpha) / (alpha * (1.0 - alpha));
  const auto below = cne(game(alpha, star - 1e-6));
  const auto above = cne(game(alpha, star + 1e-6));
  REQUIRE(below.points.size() == 1);
  REQUIRE(above.interval);
  const double a2 = below.points[0].a2;
  const double nearest =
      std::min(std::abs(a2 - above.interval->first), std::abs(a2 - above.interval->second));
  CHECK(nearest <= 1e-5);
  CHECK(below.points[0].a1 == doctest::Approx(a2 - 1.0).epsilon(1e-5));
}

TEST_CASE("common nonzero target shifts every answer") {
  const double c = 2.5;
  const auto base = cne(game(0.2, 1.0));
  const auto moved = cne(game(0.2, 1.0, c));
  CHECK(moved.points[0].a1 == doctest::Approx(base.points[0].a1 + c));
  CHECK(br1(game(0.2, 1.0, c), 0.5 + c) == doctest::Approx(-1.0 + c));
}

TEST_CASE("out-of-scope inputs are rejected") {
  CHECK_THROWS_AS(cne(GameParams::make(1.0, 0.1, 1.0, {0.0, 0.0, 0.0})), InvalidInput);
  CHECK_THROWS_AS(spne(GameParams::make(1.0, 0.1, 1.0, {0.0, 1.0})), InvalidInput);
}

}  // TEST_SUITE
