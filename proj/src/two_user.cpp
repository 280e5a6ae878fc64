#include "lsgame/two_user.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "lsgame/cost.hpp"

namespace lsgame::two_user {

namespace {

double common_target(const GameParams& params) {
  params.validate();
  if (params.n != 2) throw InvalidInput("two-user solutions need n = 2");
  if (params.d_star[0] != params.d_star[1]) {
    throw InvalidInput("two-user closed forms need equal desired departure times");
  }
  return params.d_star[0];
}

bool linear_regime(const GameParams& p) { return p.alpha >= 0.5 * p.beta; }

// Unconstrained minimizer of user 2's overlap cost at d* = 0.
double x_unconstrained(const GameParams& p, double a1) {
  const double b = p.beta, al = p.alpha, g = p.gamma;
  const double m = b - 2.0 * al;
  return -(2.0 * m * (1.0 + al * a1) - g * al * (b - al)) / (2.0 * m * m);
}

double y_unconstrained(const GameParams& p, double a2) {
  const double b = p.beta, al = p.alpha, g = p.gamma;
  return -(2.0 * b * (1.0 - al * a2) + g * al * (b - al)) / (2.0 * b * b);
}

// x*(a): clamp of X onto [a, a + 1/beta].
double x_star(const GameParams& p, double a) {
  const double ff = p.free_flow_time();
  if (linear_regime(p)) return a + ff;
  const double X = x_unconstrained(p, a);
  if (a >= X) return a;
  if (a > X - ff) return X;
  return a + ff;
}

std::vector<double> br2_centered(const GameParams& p, double a1) {
  const double ff = p.free_flow_time();
  if (a1 > -2.0 * ff) return {x_star(p, a1)};
  std::vector<double> out{-ff};
  const double m = p.beta - 2.0 * p.alpha;
  if (p.gamma == 0.0 && m != 0.0) {
    // Zero-cost arrival inside the overlap region, when it exists.
    const double other = -(1.0 + p.alpha * a1) / m;
    if (other >= a1 && other <= a1 + ff && std::abs(other + ff) > 1e-12) {
      out.push_back(other);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double br1_centered(const GameParams& p, double a2) {
  const double ff = p.free_flow_time();
  if (a2 >= 0.0) return -ff;
  const double Y = y_unconstrained(p, a2);
  if (a2 <= Y) return a2;
  if (a2 < Y + ff) return Y;
  return a2 - ff;
}

double c1_on_path(const GameParams& p, double a1, double a2) {
  const std::array<double, 2> a{a1, a2};
  return user_costs(p, a)[0];
}

// User 1's best first move against b2 when gamma > 0 and alpha < beta/2.
// c1(a, x*(a)) is quadratic between the kinks of x*, located in closed form.
double leader_argmin(const GameParams& p) {
  const double ff = p.free_flow_time();
  const double lo = -2.0 * ff;
  const double hi = 0.0;
  // X(a) = c0 + c1 a
  const double c0 = x_unconstrained(p, 0.0);
  const double c1 = x_unconstrained(p, 1.0) - c0;
  std::vector<double> cuts{lo, hi};
  for (double shift : {0.0, ff}) {
    // a = X(a) - shift
    const double denom = 1.0 - c1;
    if (denom != 0.0) {
      const double a = (c0 - shift) / denom;
      if (a > lo && a < hi) cuts.push_back(a);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  auto g = [&](double a) { return c1_on_path(p, a, x_star(p, a)); };
  // a <= -2/beta: user 2 answers -1/beta, best value at the boundary.
  double best_a = lo;
  double best = c1_on_path(p, lo, -ff);
  auto consider = [&](double a, double v) {
    if (v < best - 1e-14) {
      best = v;
      best_a = a;
    }
  };
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double l = cuts[s], r = cuts[s + 1], w = r - l;
    if (w <= 0.0) continue;
    const double fl = g(l), fm = g(0.5 * (l + r)), fr = g(r);
    consider(l, fl);
    consider(r, fr);
    const double A = 2.0 * (fr - 2.0 * fm + fl) / (w * w);
    const double B = (fr - fl) / w - A * w;
    if (A > 0.0) {
      const double t = -B / (2.0 * A);
      if (t > 0.0 && t < w) consider(l + t, g(l + t));
    }
  }
  return best_a;
}

}  // namespace

TwoUserQP quadratic_programs(const GameParams& params, double a1, double a2) {
  const double c = common_target(params);
  a1 -= c;
  a2 -= c;
  const double b = params.beta, al = params.alpha, g = params.gamma;
  TwoUserQP q;
  const double ratio = (b - 2.0 * al) / (b - al);
  q.U = ratio * ratio;
  q.V = (2.0 * (b - 2.0 * al) * (1.0 + al * a1) - g * al * (b - al)) /
        ((b - al) * (b - al));
  q.linear = linear_regime(params);
  q.X = (q.U > 0.0) ? -q.V / (2.0 * q.U) + c
                    : std::numeric_limits<double>::quiet_NaN();
  q.Y = y_unconstrained(params, a2) + c;
  return q;
}

std::vector<double> br2(const GameParams& params, double a1) {
  const double c = common_target(params);
  auto out = br2_centered(params, a1 - c);
  for (double& x : out) x += c;
  return out;
}

double br1(const GameParams& params, double a2) {
  const double c = common_target(params);
  return br1_centered(params, a2 - c) + c;
}

std::vector<ArrivalPair> EquilibriumSet2::members(int count) const {
  if (kind != Kind::IntervalFamily || !interval) return points;
  std::vector<ArrivalPair> out;
  const auto [lo, hi] = *interval;
  const int m = std::max(count, 1);
  for (int s = 0; s < m; ++s) {
    const double t = (m == 1) ? 0.5 : static_cast<double>(s) / (m - 1);
    const double a2 = lo + t * (hi - lo);
    out.push_back({a2 - free_flow_time, a2});
  }
  return out;
}

std::string to_string(EquilibriumSet2::Kind kind) {
  switch (kind) {
    case EquilibriumSet2::Kind::UniquePoint:
      return "unique-point";
    case EquilibriumSet2::Kind::TwoPoints:
      return "two-points";
    case EquilibriumSet2::Kind::IntervalFamily:
      return "interval-family";
  }
  return "unknown";
}

EquilibriumSet2 spne(const GameParams& params) {
  const double c = common_target(params);
  const double b = params.beta, al = params.alpha;
  const double ff = params.free_flow_time();
  const double together = -1.0 / (b - al);

  EquilibriumSet2 out;
  out.free_flow_time = ff;
  if (params.gamma == 0.0) {
    if (!linear_regime(params)) {
      out.points = {{together, together}};
    } else {
      out.kind = EquilibriumSet2::Kind::TwoPoints;
      out.points = {{together, together}, {-ff, 0.0}};
    }
  } else if (linear_regime(params)) {
    out.points = {{-ff, 0.0}};
  } else {
    const double a1 = leader_argmin(params);
    out.points = {{a1, br2_centered(params, a1).front()}};
  }
  for (auto& pt : out.points) {
    pt.a1 += c;
    pt.a2 += c;
  }
  return out;
}

EquilibriumSet2 cne(const GameParams& params) {
  const double c = common_target(params);
  const double b = params.beta, al = params.alpha, g = params.gamma;
  const double ff = params.free_flow_time();
  const double together = -1.0 / (b - al);

  EquilibriumSet2 out;
  out.free_flow_time = ff;
  if (g == 0.0) {
    if (!linear_regime(params)) {
      out.points = {{together, together}};
    } else {
      out.kind = EquilibriumSet2::Kind::TwoPoints;
      out.points = {{together, together}, {-ff, 0.0}};
    }
  } else if (!linear_regime(params)) {
    const double m = b - 2.0 * al;
    const bool interior =
        al == 0.0 || g <= m / (al * (b - al));
    if (interior) {
      const double a1 = together - g * al * (b * b - 4.0 * al * b) / (2.0 * b * b * m);
      const double a2 = together + g * al * (b + 2.0 * al) / (2.0 * b * m);
      out.points = {{a1, a2}};
    } else {
      out.kind = EquilibriumSet2::Kind::IntervalFamily;
      const double lo = -std::min(g * al / (2.0 * b), ff);
      const double hi = -std::max(ff - g * al / (2.0 * m), 0.0);
      out.interval = {lo, hi};
    }
  } else {
    out.kind = EquilibriumSet2::Kind::IntervalFamily;
    out.interval = {-std::min(g * al / (2.0 * b), ff), 0.0};
  }
  for (auto& pt : out.points) {
    pt.a1 += c;
    pt.a2 += c;
  }
  if (out.interval) {
    out.interval->first += c;
    out.interval->second += c;
  }
  return out;
}

}  // namespace lsgame::two_user
