#pragma once

// Reference implementations used only by the tests. None of them share code
// with the library: departures come from an event-driven fluid simulation,
// minimization from grids plus golden-section refinement, quantiles from
// bisection on erfc.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

struct Game {
  double beta;
  double alpha;
  double gamma;
  std::vector<double> d_star;
};

/// Advances every user in the system at the common speed between events.
/// Arrivals in any order; returns departures in the same indexing.
inline std::vector<double> simulate(const Game& g, const std::vector<double>& a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x] < a[y]; });
  std::vector<double> remaining(n, 1.0), d(n, 0.0);
  std::vector<std::size_t> inside;
  std::size_t next = 0;
  double t = a[order[0]];
  while (next < n || !inside.empty()) {
    if (inside.empty()) {
      t = a[order[next]];
      inside.push_back(order[next++]);
      continue;
    }
    const double v = g.beta - g.alpha * (static_cast<double>(inside.size()) - 1.0);
    double least = std::numeric_limits<double>::infinity();
    for (auto j : inside) least = std::min(least, remaining[j]);
    const double t_finish = t + least / v;
    if (next < n && a[order[next]] <= t_finish) {
      const double ta = a[order[next]];
      for (auto j : inside) remaining[j] -= v * (ta - t);
      t = ta;
      inside.push_back(order[next++]);
    } else {
      for (auto j : inside) remaining[j] -= v * (t_finish - t);
      t = t_finish;
      std::vector<std::size_t> still;
      for (auto j : inside) {
        if (remaining[j] <= 1e-13) {
          d[j] = t;
        } else {
          still.push_back(j);
        }
      }
      inside.swap(still);
    }
  }
  return d;
}

inline double cost(const Game& g, const std::vector<double>& a, std::size_t i) {
  const auto d = simulate(g, a);
  return (d[i] - g.d_star[i]) * (d[i] - g.d_star[i]) + g.gamma * (d[i] - a[i]);
}

inline double total(const Game& g, const std::vector<double>& a) {
  const auto d = simulate(g, a);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += (d[i] - g.d_star[i]) * (d[i] - g.d_star[i]) + g.gamma * (d[i] - a[i]);
  }
  return s;
}

inline double golden(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-10) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

struct Minimum {
  double x;
  double value;
};

/// Grid of step `step` on [lo, hi], then golden-section around the best few
/// grid points (each bracketed by its neighbours).
inline Minimum grid_minimize(const std::function<double(double)>& f, double lo,
                             double hi, double step) {
  const int m = static_cast<int>(std::ceil((hi - lo) / step));
  std::vector<std::pair<double, double>> pts;
  pts.reserve(m + 1);
  for (int s = 0; s <= m; ++s) {
    const double x = std::min(hi, lo + s * step);
    pts.emplace_back(f(x), x);
  }
  Minimum best{pts[0].second, pts[0].first};
  for (const auto& [v, x] : pts) {
    if (v < best.value) best = {x, v};
  }
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const std::size_t keep = std::min<std::size_t>(8, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + keep, idx.end(),
                    [&](std::size_t x, std::size_t y) { return pts[x].first < pts[y].first; });
  for (std::size_t r = 0; r < keep; ++r) {
    const std::size_t c = idx[r];
    const double l = pts[c > 0 ? c - 1 : c].second;
    const double h = pts[c + 1 < pts.size() ? c + 1 : c].second;
    if (!(l < h)) continue;
    const double x = golden(f, l, h);
    const double v = f(x);
    if (v < best.value) best = {x, v};
  }
  return best;
}

/// Catalan numbers by counting monotone lattice paths below the diagonal.
inline unsigned long long lattice_paths(int n) {
  std::vector<std::vector<unsigned long long>> c(n + 1,
                                                 std::vector<unsigned long long>(n + 1, 0));
  c[0][0] = 1;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= i; ++j) {
      if (i == 0 && j == 0) continue;
      unsigned long long v = 0;
      if (i > 0 && j <= i - 1) v += c[i - 1][j];
      if (j > 0) v += c[i][j - 1];
      c[i][j] = v;
    }
  }
  return c[n][n];
}

/// Standard normal quantile by bisection on 0.5 erfc(-x / sqrt 2).
inline double normal_quantile(double p) {
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct ProfileMinimum {
  std::vector<double> a;
  double value;
};

/// Social optimum for n <= 3: ordered grid over [lo, hi]^n, then pattern
/// search along every direction in {-1, 0, 1}^n plus random directions
/// (valleys along regime boundaries are not axis aligned; unordered trial
/// points are rejected) from the best grid points.
inline ProfileMinimum grid_social(const Game& g, double lo, double hi, double step) {
  const std::size_t n = g.d_star.size();
  const int m = static_cast<int>(std::ceil((hi - lo) / step));
  std::vector<ProfileMinimum> pool;
  std::vector<int> idx(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int from) {
    if (pos == n) {
      std::vector<double> a(n);
      for (std::size_t i = 0; i < n; ++i) a[i] = lo + idx[i] * step;
      pool.push_back({a, total(g, a)});
      return;
    }
    for (int s = from; s <= m; ++s) {
      idx[pos] = s;
      rec(pos + 1, s);
    }
  };
  rec(0, 0);

  std::vector<std::vector<double>> dirs;
  std::vector<double> dir(n, -1.0);
  for (;;) {
    if (std::any_of(dir.begin(), dir.end(), [](double x) { return x != 0.0; })) {
      dirs.push_back(dir);
    }
    std::size_t i = 0;
    while (i < n && dir[i] == 1.0) dir[i++] = -1.0;
    if (i == n) break;
    dir[i] += 1.0;
  }
  std::mt19937_64 rng(17);
  std::normal_distribution<double> z;
  for (int r = 0; r < 96; ++r) {
    std::vector<double> d(n);
    double norm = 0.0;
    for (double& x : d) {
      x = z(rng);
      norm += x * x;
    }
    for (double& x : d) x /= std::sqrt(norm);
    dirs.push_back(d);
  }

  const std::size_t keep = std::min<std::size_t>(12, pool.size());
  std::partial_sort(pool.begin(), pool.begin() + keep, pool.end(),
                    [](const auto& x, const auto& y) { return x.value < y.value; });
  ProfileMinimum best = pool[0];
  for (std::size_t r = 0; r < keep; ++r) {
    ProfileMinimum cur = pool[r];
    double h = step;
    while (h > 1e-10) {
      bool moved = false;
      for (const auto& d : dirs) {
        std::vector<double> t = cur.a;
        for (std::size_t k = 0; k < n; ++k) t[k] += h * d[k];
        if (!std::is_sorted(t.begin(), t.end())) continue;
        const double v = total(g, t);
        if (v < cur.value - 1e-15) {
          cur = {t, v};
          moved = true;
        }
      }
      if (!moved) h *= 0.5;
    }
    if (cur.value < best.value) best = cur;
  }
  return best;
}

}  // namespace oracle
