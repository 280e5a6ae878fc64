#include "lsgame/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace lsgame {

namespace detail {

int solve_sorted(double beta, double alpha, std::span<const double> a,
                 std::span<double> d, std::span<int> k, std::span<int> h) {
  const std::size_t n = a.size();
  // prefix sums: pa[j] = a_0 + ... + a_{j-1}, same for pd.
  std::vector<double> pa(n + 1, 0.0), pd(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) pa[j + 1] = pa[j] + a[j];

  int evaluations = 0;
  std::size_t hp = 0;
  std::size_t kp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (hp < i && d[hp] < a[i]) ++hp;
    kp = std::max(kp, i);

    const double own = beta - alpha * static_cast<double>(i - hp);
    const double ahead = alpha * (pd[i] - pd[hp]);
    auto eval = [&](std::size_t last) {
      ++evaluations;
      const double behind = alpha * (pa[last + 1] - pa[i + 1]);
      return (1.0 + own * a[i] + ahead - behind) /
             (beta - alpha * static_cast<double>(last - i));
    };

    double di = eval(kp);
    while (kp + 1 < n && a[kp + 1] <= di) {
      ++kp;
      di = eval(kp);
    }
    if (i > 0) di = std::max(di, d[i - 1]);
    d[i] = di;
    pd[i + 1] = pd[i] + di;
    k[i] = static_cast<int>(kp);
    h[i] = static_cast<int>(hp);
  }
  if (evaluations > static_cast<int>(4 * n)) {
    throw SolverError("departure recursion exceeded 4n evaluations");
  }
  return evaluations;
}

void slopes_sorted(double beta, double alpha, std::span<const int> k,
                   std::span<const int> h, std::size_t moving,
                   std::span<double> slope) {
  const std::size_t n = k.size();
  std::vector<double> ps(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto hi = static_cast<std::size_t>(h[i]);
    const auto ki = static_cast<std::size_t>(k[i]);
    double num = alpha * (ps[i] - ps[hi]);
    if (i == moving) num += beta - alpha * static_cast<double>(i - hi);
    if (moving > i && moving <= ki) num -= alpha;
    slope[i] = num / (beta - alpha * static_cast<double>(ki - i));
    ps[i + 1] = ps[i] + slope[i];
  }
}

}  // namespace detail

namespace {

void require_ordered(const GameParams& params, std::span<const double> a) {
  if (a.size() != static_cast<std::size_t>(params.n)) {
    throw InvalidInput("expected " + std::to_string(params.n) +
                       " arrival times, got " + std::to_string(a.size()));
  }
  for (double t : a) {
    if (!std::isfinite(t)) throw InvalidInput("arrival times must be finite");
  }
  if (!std::is_sorted(a.begin(), a.end())) {
    throw InvalidInput("arrival times must be non-decreasing");
  }
}

void require_pair(std::span<const double> a, std::span<const double> d) {
  if (a.size() != d.size()) {
    throw InvalidInput("arrival and departure vectors differ in length");
  }
  if (!std::is_sorted(a.begin(), a.end())) {
    throw InvalidInput("arrival times must be non-decreasing");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(d[i] > a[i])) throw InvalidInput("departure must follow arrival");
  }
}

}  // namespace

DepartureProfile solve_departures(const GameParams& params,
                                  const ArrivalProfile& arrivals) {
  params.validate();
  require_ordered(params, arrivals.times);
  const std::size_t n = arrivals.size();
  DepartureProfile out{std::vector<double>(n)};
  std::vector<int> k(n), h(n);
  detail::solve_sorted(params.beta, params.alpha, arrivals.times, out.times, k,
                       h);
  return out;
}

std::vector<double> departures_unordered(const GameParams& params,
                                         std::span<const double> arrivals) {
  const std::size_t n = arrivals.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return arrivals[x] < arrivals[y];
  });
  std::vector<double> a(n), d(n);
  std::vector<int> k(n), h(n);
  for (std::size_t r = 0; r < n; ++r) a[r] = arrivals[order[r]];
  detail::solve_sorted(params.beta, params.alpha, a, d, k, h);
  std::vector<double> out(n);
  for (std::size_t r = 0; r < n; ++r) out[order[r]] = d[r];
  return out;
}

PermutationVector permutation_of(const GameParams& params,
                                 const ArrivalProfile& arrivals,
                                 const DepartureProfile& departures) {
  params.validate();
  require_ordered(params, arrivals.times);
  require_pair(arrivals.times, departures.times);
  const auto& a = arrivals.times;
  const auto& d = departures.times;
  const int n = params.n;
  PermutationVector p;
  p.k.resize(n);
  p.h.resize(n);
  for (int i = 0; i < n; ++i) {
    int kk = i;
    while (kk + 1 < n && a[kk + 1] <= d[i] + kEventTolerance) ++kk;
    p.k[i] = kk + 1;
    int hh = 0;
    while (hh < i && d[hh] < a[i] - kEventTolerance) ++hh;
    p.h[i] = hh + 1;
  }
  return p;
}

namespace {

void extend(int n, std::vector<int>& prefix, std::vector<PermutationVector>& out) {
  const int i = static_cast<int>(prefix.size()) + 1;  // 1-based position
  if (i > n) {
    out.push_back(PermutationVector::from_k(prefix));
    return;
  }
  // k_i >= i, k_i >= k_{i-1}, and k_n = n.
  const int lo = (i == n) ? n : std::max(i, prefix.empty() ? 1 : prefix.back());
  for (int v = lo; v <= n; ++v) {
    prefix.push_back(v);
    extend(n, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<PermutationVector> enumerate_permutations(int n, int cap) {
  if (n < 1) throw InvalidInput("n must be positive");
  if (n > cap) {
    throw InvalidInput("enumerate_permutations: n = " + std::to_string(n) +
                       " exceeds cap " + std::to_string(cap));
  }
  std::vector<PermutationVector> out;
  out.reserve(catalan(n));
  std::vector<int> prefix;
  extend(n, prefix, out);
  return out;
}

unsigned long long catalan(int n) {
  unsigned long long c = 1;
  for (int i = 0; i < n; ++i) {
    // C_{i+1} = C_i * 2(2i+1) / (i+2)
    c = c * 2 * (2 * i + 1) / (i + 2);
  }
  return c;
}

double verify_dynamics(const GameParams& params, const ArrivalProfile& arrivals,
                       const DepartureProfile& departures,
                       double quadrature_step) {
  if (quadrature_step < 0.0) throw InvalidInput("quadrature_step must be >= 0");
  require_pair(arrivals.times, departures.times);
  const auto& a = arrivals.times;
  const auto& d = departures.times;
  const std::size_t n = a.size();

  std::vector<double> times;
  times.reserve(2 * n);
  times.insert(times.end(), a.begin(), a.end());
  times.insert(times.end(), d.begin(), d.end());
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  std::vector<double> sorted_d(d.begin(), d.end());
  std::sort(sorted_d.begin(), sorted_d.end());

  // G(t) = integral of the speed up to t, accumulated event by event.
  std::vector<double> cumulative(times.size(), 0.0);
  for (std::size_t e = 0; e + 1 < times.size(); ++e) {
    const double t = times[e];
    const auto arrived = std::upper_bound(a.begin(), a.end(), t) - a.begin();
    const auto left =
        std::upper_bound(sorted_d.begin(), sorted_d.end(), t) - sorted_d.begin();
    const double q = static_cast<double>(arrived - left);
    const double speed = params.beta - params.alpha * (q - 1.0);
    cumulative[e + 1] = cumulative[e] + speed * (times[e + 1] - t);
  }
  auto at = [&](double t) {
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    return cumulative[static_cast<std::size_t>(it - times.begin())];
  };

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(at(d[i]) - at(a[i]) - 1.0));
  }
  return worst;
}

SystemTrajectory queue_trajectory(const ArrivalProfile& arrivals,
                                  const DepartureProfile& departures) {
  require_pair(arrivals.times, departures.times);
  SystemTrajectory tr;
  const auto n = static_cast<int>(arrivals.size());
  tr.events.reserve(2 * arrivals.size());
  for (int i = 0; i < n; ++i) {
    tr.events.push_back({arrivals[i], 0, true, i});
    tr.events.push_back({departures[i], 0, false, i});
  }
  std::stable_sort(tr.events.begin(), tr.events.end(),
                   [](const TrajectoryEvent& x, const TrajectoryEvent& y) {
                     if (x.t != y.t) return x.t < y.t;
                     return x.arrival && !y.arrival;
                   });
  int q = 0;
  for (auto& e : tr.events) {
    q += e.arrival ? 1 : -1;
    e.q = q;
  }
  return tr;
}

double throughput_peak(const GameParams& params) {
  if (!(params.beta > 0.0)) throw InvalidInput("beta must be > 0");
  if (!(params.alpha > 0.0)) {
    throw InvalidInput("throughput peak is unbounded when alpha = 0");
  }
  return (params.beta + params.alpha) / (2.0 * params.alpha);
}

}  // namespace lsgame
