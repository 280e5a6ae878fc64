#include "lsgame/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lsgame/dynamics.hpp"

namespace lsgame {

namespace {

constexpr double kBisectionTolerance = 1e-11;

double probe_offset(double x) { return 1e-10 * std::max(1.0, std::abs(x)); }

struct Regime {
  std::vector<int> k;
  std::vector<int> h;
  int position = 0;

  bool operator==(const Regime&) const = default;
};

struct Event {
  double t;
  double slope;
  bool arrival;
};

// Evaluates the game as one user's arrival moves, keeping the others sorted
// once so each evaluation is a linear merge plus one recursion.
class MovingUser {
public:
  MovingUser(const GameParams& params, std::span<const double> arrivals,
             std::size_t user, Objective objective)
      : params_(params), user_(user), objective_(objective) {
    const std::size_t n = arrivals.size();
    if (n != static_cast<std::size_t>(params.n)) {
      throw InvalidInput("expected " + std::to_string(params.n) +
                         " arrival times");
    }
    if (user >= n) throw InvalidInput("user index out of range");
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(arrivals[j])) {
        throw InvalidInput("arrival times must be finite");
      }
      if (j != user) others_.push_back({arrivals[j], j});
    }
    std::stable_sort(others_.begin(), others_.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    a_.resize(n);
    d_.resize(n);
    slope_.resize(n);
    k_.resize(n);
    h_.resize(n);
    who_.resize(n);
  }

  double value_at(double x) {
    solve_at(x);
    return objective();
  }

  Regime regime() const {
    Regime r;
    r.k.resize(k_.size());
    r.h.resize(h_.size());
    for (std::size_t i = 0; i < k_.size(); ++i) {
      r.k[i] = k_[i] + 1;
      r.h[i] = h_[i] + 1;
    }
    r.position = static_cast<int>(pos_);
    return r;
  }

  // Smallest x > p at which two adjacent events (in the regime holding at p)
  // meet, or +inf. All event times are affine in x inside one regime.
  double next_break(double p) {
    solve_at(p);
    detail::slopes_sorted(params_.beta, params_.alpha, k_, h_, pos_, slope_);
    const std::size_t n = a_.size();
    arrivals_ev_.clear();
    departures_ev_.clear();
    for (std::size_t r = 0; r < n; ++r) {
      arrivals_ev_.push_back({a_[r], r == pos_ ? 1.0 : 0.0, true});
      departures_ev_.push_back({d_[r], slope_[r], false});
    }
    merged_.resize(2 * n);
    std::merge(arrivals_ev_.begin(), arrivals_ev_.end(), departures_ev_.begin(),
               departures_ev_.end(), merged_.begin(),
               [](const Event& x, const Event& y) {
                 if (x.t != y.t) return x.t < y.t;
                 return x.slope < y.slope;
               });
    double best = std::numeric_limits<double>::infinity();
    const double floor = p + 1e-3 * probe_offset(p);
    for (std::size_t e = 0; e + 1 < merged_.size(); ++e) {
      const Event& first = merged_[e];
      const Event& second = merged_[e + 1];
      if (!first.arrival && !second.arrival) continue;  // FIFO keeps these
      if (first.arrival && second.arrival && first.slope == second.slope) continue;
      const double closing = first.slope - second.slope;
      if (closing <= 0.0) continue;
      const double xc = p + (second.t - first.t) / closing;
      if (xc > floor) best = std::min(best, xc);
    }
    return best;
  }

  std::size_t size() const { return a_.size(); }
  std::span<const double> sorted_arrivals() const { return a_; }
  std::span<const double> sorted_departures() const { return d_; }

private:
  void solve_at(double x) {
    const std::size_t n = a_.size();
    const auto it = std::lower_bound(
        others_.begin(), others_.end(), x,
        [](const auto& o, double v) { return o.first < v; });
    pos_ = static_cast<std::size_t>(it - others_.begin());
    std::size_t src = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == pos_) {
        a_[r] = x;
        who_[r] = user_;
      } else {
        a_[r] = others_[src].first;
        who_[r] = others_[src].second;
        ++src;
      }
    }
    detail::solve_sorted(params_.beta, params_.alpha, a_, d_, k_, h_);
  }

  double objective() const {
    if (objective_ == Objective::OwnCost) {
      const double dev = d_[pos_] - params_.d_star[user_];
      return dev * dev + params_.gamma * (d_[pos_] - a_[pos_]);
    }
    double total = 0.0;
    for (std::size_t r = 0; r < a_.size(); ++r) {
      const double dev = d_[r] - params_.d_star[who_[r]];
      total += dev * dev + params_.gamma * (d_[r] - a_[r]);
    }
    return total;
  }

  const GameParams& params_;
  std::size_t user_;
  Objective objective_;
  std::vector<std::pair<double, std::size_t>> others_;
  std::vector<double> a_, d_, slope_;
  std::vector<int> k_, h_;
  std::vector<std::size_t> who_;
  std::size_t pos_ = 0;
  std::vector<Event> arrivals_ev_, departures_ev_, merged_;
};

// Local quadratic through (0, f0), (w/2, fm), (w, f1): f = A t^2 + B t + C.
struct LocalQuadratic {
  double A, B, C;
};

LocalQuadratic interpolate(double w, double f0, double fm, double f1) {
  LocalQuadratic q;
  q.C = f0;
  q.A = 2.0 * (f1 - 2.0 * fm + f0) / (w * w);
  q.B = (f1 - f0) / w - q.A * w;
  return q;
}

struct ScanPoint {
  double lo, hi, f_lo, f_mid, f_hi;
  Regime regime;
};

// Walks [lo, hi] regime by regime. `visit` receives each segment and returns
// the (possibly reduced) right end of the range still worth scanning.
template <typename Visit>
int walk_segments(MovingUser& mover, double lo, double hi, Visit&& visit) {
  const int n = static_cast<int>(mover.size());
  const long long max_segments = 8LL * n * n * n + 64;
  int count = 0;
  double x = lo;
  double f_lo = mover.value_at(lo);
  while (x < hi) {
    double p = x + probe_offset(x);
    if (p >= hi) p = 0.5 * (x + hi);
    double bp = std::min(mover.next_break(p), hi);
    const Regime at_probe = mover.regime();
    bp = std::max(bp, std::min(hi, x + 2.0 * probe_offset(x)));

    double mid = 0.5 * (x + bp);
    double f_mid = mover.value_at(mid);
    Regime at_mid = mover.regime();
    if (mid > p && !(at_mid == at_probe)) {
      // Prediction failed; locate the first regime change by bisection.
      double good = p;
      double bad = bp;
      while (bad - good > kBisectionTolerance) {
        const double m = 0.5 * (good + bad);
        mover.value_at(m);
        if (mover.regime() == at_probe) {
          good = m;
        } else {
          bad = m;
        }
      }
      bp = bad;
      mid = 0.5 * (x + bp);
      f_mid = mover.value_at(mid);
      at_mid = mover.regime();
    }
    const double f_hi = mover.value_at(bp);
    ++count;
    if (count > max_segments) {
      throw SolverError("segment scan did not terminate within the O(n^3) bound");
    }
    hi = std::min(hi, visit(ScanPoint{x, bp, f_lo, f_mid, f_hi, std::move(at_mid)}));
    x = bp;
    f_lo = f_hi;
  }
  return count;
}

QuadraticSegment to_segment(const ScanPoint& s) {
  QuadraticSegment seg;
  seg.lo = s.lo;
  seg.hi = s.hi;
  const double w = s.hi - s.lo;
  if (w > 0.0) {
    const LocalQuadratic q = interpolate(w, s.f_lo, s.f_mid, s.f_hi);
    seg.u = q.A;
    seg.v = q.B - 2.0 * q.A * s.lo;
    seg.w = q.C - q.B * s.lo + q.A * s.lo * s.lo;
  } else {
    seg.w = s.f_lo;
  }
  seg.permutation.k = s.regime.k;
  seg.permutation.h = s.regime.h;
  seg.position = s.regime.position;
  return seg;
}

}  // namespace

std::vector<double> user_costs(const GameParams& params,
                               std::span<const double> arrivals) {
  params.validate();
  if (arrivals.size() != static_cast<std::size_t>(params.n)) {
    throw InvalidInput("expected " + std::to_string(params.n) +
                       " arrival times");
  }
  const std::vector<double> d = departures_unordered(params, arrivals);
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double dev = d[i] - params.d_star[i];
    out[i] = dev * dev + params.gamma * (d[i] - arrivals[i]);
  }
  return out;
}

double user_cost(const GameParams& params, const ArrivalProfile& arrivals,
                 std::size_t user) {
  if (!arrivals.ordered()) throw InvalidInput("arrival times must be non-decreasing");
  if (user >= arrivals.size()) throw InvalidInput("user index out of range");
  return user_costs(params, arrivals.times)[user];
}

double total_cost(const GameParams& params, const ArrivalProfile& arrivals) {
  if (!arrivals.ordered()) throw InvalidInput("arrival times must be non-decreasing");
  const auto c = user_costs(params, arrivals.times);
  return std::accumulate(c.begin(), c.end(), 0.0);
}

double objective_value(const GameParams& params,
                       std::span<const double> arrivals, std::size_t user,
                       Objective objective) {
  const auto c = user_costs(params, arrivals);
  if (user >= c.size()) throw InvalidInput("user index out of range");
  return objective == Objective::OwnCost ? c[user]
                                         : std::accumulate(c.begin(), c.end(), 0.0);
}

SearchInterval search_interval(const GameParams& params,
                               std::span<const double> arrivals,
                               std::size_t user) {
  params.validate();
  const std::size_t n = arrivals.size();
  if (n != static_cast<std::size_t>(params.n)) {
    throw InvalidInput("expected " + std::to_string(params.n) + " arrival times");
  }
  if (user >= n) throw InvalidInput("user index out of range");
  const double ff = params.free_flow_time();
  const double target = params.d_star[user] - ff;
  const std::vector<double> d = departures_unordered(params, arrivals);

  SearchInterval s;
  if (user == 0) {
    double floor = std::min(arrivals[0], target);
    for (std::size_t j = 1; j < n; ++j) floor = std::min(floor, arrivals[j] - ff);
    s.lo = floor - 2.0 * ff - params.slowest_sojourn();
  } else {
    s.lo = arrivals[user - 1];
  }
  s.hi = std::max(*std::max_element(d.begin(), d.end()), target) + 2.0 * ff;
  s.hi = std::max(s.hi, s.lo);
  return s;
}

std::vector<QuadraticSegment> scan_segments(const GameParams& params,
                                            std::span<const double> arrivals,
                                            std::size_t user,
                                            Objective objective, double lo,
                                            double hi) {
  params.validate();
  if (!(lo < hi)) throw InvalidInput("scan interval must be non-empty");
  MovingUser mover(params, arrivals, user, objective);
  std::vector<QuadraticSegment> out;
  walk_segments(mover, lo, hi, [&](ScanPoint s) {
    out.push_back(to_segment(s));
    return hi;
  });
  return out;
}

BestResponseResult best_response_in(const GameParams& params,
                                    std::span<const double> arrivals,
                                    std::size_t user, Objective objective,
                                    double lo, double hi, bool prune) {
  params.validate();
  if (!(lo <= hi)) throw InvalidInput("best-response interval is empty");
  MovingUser mover(params, arrivals, user, objective);

  std::vector<std::pair<double, double>> candidates;
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](double x, double f) {
    candidates.emplace_back(x, f);
    best = std::min(best, f);
  };

  const bool bounded = prune && objective == Objective::OwnCost;
  const double target = params.d_star[user] - params.free_flow_time();
  const double floor_cost = params.gamma / params.beta;
  double scan_lo = lo;
  if (bounded) {
    // Seed the bound with the current position and the free-flow target.
    const double start = std::clamp(target, lo, hi);
    consider(start, mover.value_at(start));
    if (arrivals[user] >= lo && arrivals[user] <= hi) {
      consider(arrivals[user], mover.value_at(arrivals[user]));
    }
    const double slack = std::sqrt(std::max(0.0, best - floor_cost) + kMinimizerTolerance);
    scan_lo = std::max(lo, params.d_star[user] - params.slowest_sojourn() - slack);
  }
  auto right_limit = [&] {
    if (!bounded) return hi;
    const double slack = std::sqrt(std::max(0.0, best - floor_cost) + kMinimizerTolerance);
    return std::max(scan_lo, target + slack);
  };

  BestResponseResult result;
  if (scan_lo < hi) {
    consider(scan_lo, mover.value_at(scan_lo));
    const double scan_hi = std::min(hi, right_limit());
    if (scan_lo < scan_hi) {
      result.segments_scanned = walk_segments(mover, scan_lo, scan_hi, [&](ScanPoint s) {
        consider(s.hi, s.f_hi);
        const double w = s.hi - s.lo;
        if (w > 0.0) {
          const LocalQuadratic q = interpolate(w, s.f_lo, s.f_mid, s.f_hi);
          if (q.A > 0.0) {
            const double t = -q.B / (2.0 * q.A);
            if (t > 0.0 && t < w) {
              const double x = s.lo + t;
              consider(x, mover.value_at(x));
            }
          }
        }
        return right_limit();
      });
    }
  } else {
    consider(lo, mover.value_at(lo));
  }

  std::sort(candidates.begin(), candidates.end());
  result.min_cost = best;
  // Near-optimal candidates in one basin collapse to a single minimizer.
  bool chained = false;
  for (const auto& [x, f] : candidates) {
    if (f > best + kMinimizerTolerance) {
      chained = false;
      continue;
    }
    const bool same_basin =
        chained && (std::abs(x - result.minimizers.back()) <= kMinimizerTolerance ||
                    mover.value_at(0.5 * (x + result.minimizers.back())) <=
                        best + kMinimizerTolerance);
    chained = true;
    if (same_basin) {
      if (f < result.costs.back()) {
        result.minimizers.back() = x;
        result.costs.back() = f;
      }
      continue;
    }
    result.minimizers.push_back(x);
    result.costs.push_back(f);
  }
  return result;
}

BestResponseResult best_response(const GameParams& params,
                                 const ArrivalProfile& arrivals,
                                 std::size_t user) {
  if (!arrivals.ordered()) throw InvalidInput("arrival times must be non-decreasing");
  const SearchInterval s = search_interval(params, arrivals.times, user);
  return best_response_in(params, arrivals.times, user, Objective::OwnCost, s.lo,
                          s.hi);
}

}  // namespace lsgame
