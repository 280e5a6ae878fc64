#include "lsgame/social.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "lsgame/cost.hpp"
#include "lsgame/dynamics.hpp"
#include "lsgame/equilibrium.hpp"
#include "lsgame/qp.hpp"

namespace lsgame {

namespace {

// d = M a + c inside the regime k.
struct AffineDepartures {
  Eigen::MatrixXd M;
  Eigen::VectorXd c;
};

AffineDepartures affine_map(const GameParams& p, const PermutationVector& pv) {
  const int n = p.n;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int k = pv.k[i] - 1;
    const int h = pv.h[i] - 1;
    D(i, i) = p.beta - p.alpha * (k - i);
    for (int j = h; j < i; ++j) D(i, j) = -p.alpha;
    A(i, i) = p.beta - p.alpha * (i - h);
    for (int j = i + 1; j <= k; ++j) A(i, j) = -p.alpha;
  }
  const auto lower = D.triangularView<Eigen::Lower>();
  AffineDepartures out;
  out.M = lower.solve(A);
  out.c = lower.solve(Eigen::VectorXd::Ones(n));
  return out;
}

void check_regime(int n, const PermutationVector& pv) {
  if (static_cast<int>(pv.k.size()) != n || static_cast<int>(pv.h.size()) != n) {
    throw InvalidInput("permutation vector size does not match n");
  }
  for (int i = 0; i < n; ++i) {
    if (pv.k[i] < i + 1 || pv.k[i] > n || (i > 0 && pv.k[i] < pv.k[i - 1])) {
      throw InvalidInput("invalid permutation vector " + pv.to_string());
    }
  }
  if (pv.k.back() != n) throw InvalidInput("k_n must equal n");
  if (!(PermutationVector::from_k(pv.k) == pv)) {
    throw InvalidInput("h is inconsistent with k in " + pv.to_string());
  }
}

PermutationVector realized(const GameParams& params, const ArrivalProfile& a) {
  return permutation_of(params, a, solve_departures(params, a));
}

}  // namespace

std::optional<WithinResult> optimize_within_permutation(const GameParams& params,
                                                        const PermutationVector& pv) {
  params.validate();
  const int n = params.n;
  check_regime(n, pv);
  const AffineDepartures map = affine_map(params, pv);
  const Eigen::VectorXd dstar =
      Eigen::Map<const Eigen::VectorXd>(params.d_star.data(), n);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);

  qp::Problem pr;
  pr.H = 2.0 * map.M.transpose() * map.M;
  pr.g = 2.0 * map.M.transpose() * (map.c - dstar) +
         params.gamma * (map.M.transpose() * ones - ones);

  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (int i = 0; i + 1 < n; ++i) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    r(i + 1) = 1.0;
    r(i) = -1.0;
    rows.push_back(r);
    rhs.push_back(0.0);
  }
  for (int i = 0; i < n; ++i) {
    const int k = pv.k[i] - 1;
    Eigen::VectorXd r = map.M.row(i).transpose();
    r(k) -= 1.0;
    rows.push_back(r);  // d_i - a_{k_i} >= 0
    rhs.push_back(-map.c(i));
    if (k + 1 < n) {
      Eigen::VectorXd s = -map.M.row(i).transpose();
      s(k + 1) += 1.0;
      rows.push_back(s);  // a_{k_i + 1} - d_i >= 0
      rhs.push_back(map.c(i));
    }
  }
  pr.C.resize(static_cast<Eigen::Index>(rows.size()), n);
  pr.b.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    pr.C.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
    pr.b(static_cast<Eigen::Index>(r)) = rhs[r];
  }

  const auto sol = qp::solve(pr);
  if (!sol) return std::nullopt;
  WithinResult out;
  out.profile = clamp_order(std::vector<double>(sol->x.data(), sol->x.data() + n));
  out.total = total_cost(params, out.profile);
  return out;
}

OptimumResult exhaustive_optimum(const GameParams& params, int cap) {
  params.validate();
  if (params.n > cap) {
    throw InvalidInput("exhaustive search limited to n <= " + std::to_string(cap));
  }
  OptimumResult best;
  best.method = "exhaustive";
  best.total = std::numeric_limits<double>::infinity();
  for (const auto& pv : enumerate_permutations(params.n, cap)) {
    PermutationCertificate cert{pv, std::nullopt};
    if (const auto r = optimize_within_permutation(params, pv)) {
      cert.total = r->total;
      if (r->total < best.total) {
        best.total = r->total;
        best.profile = r->profile;
      }
    }
    best.certificates.push_back(std::move(cert));
  }
  if (!std::isfinite(best.total)) throw SolverError("no feasible regime found");
  best.permutation = realized(params, best.profile);
  return best;
}

namespace {

// Cyclic coordinate descent on the total cost, each user confined between
// its neighbours so the order is kept.
double descend(const GameParams& params, std::vector<double>& a) {
  const std::size_t n = a.size();
  double current = total_cost(params, ArrivalProfile{a});
  for (int cycle = 0; cycle < 10000; ++cycle) {
    const double start = current;
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = (i == 0) ? search_interval(params, a, 0).lo : a[i - 1];
      const double hi = (i + 1 == n) ? search_interval(params, a, n - 1).hi : a[i + 1];
      if (!(lo < hi)) continue;
      const BestResponseResult br =
          best_response_in(params, a, i, Objective::TotalCost, lo, hi, false);
      if (br.min_cost < current - 1e-13) {
        a[i] = br.minimizers.front();
        current = br.min_cost;
      }
    }
    if (start - current <= 1e-10 * (1.0 + std::abs(current))) break;
  }
  return current;
}

}  // namespace

OptimumResult heuristic_optimum(const GameParams& params, int restarts,
                                std::uint64_t seed) {
  params.validate();
  if (restarts <= 0) throw InvalidInput("restarts must be positive");
  std::vector<ArrivalProfile> starts;
  std::vector<double> target(params.n);
  for (int i = 0; i < params.n; ++i) {
    target[i] = params.d_star[i] - params.free_flow_time();
  }
  starts.push_back(clamp_order(target));
  if (restarts > 1) {
    auto extra = generate_initials(params, restarts - 1,
                                   InitialScheme::NormalAroundTarget, seed);
    starts.insert(starts.end(), extra.begin(), extra.end());
  }

  OptimumResult best;
  best.method = "heuristic";
  best.total = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    std::vector<double> a = s.times;
    double value = descend(params, a);
    for (int round = 0; round < 50; ++round) {
      const auto polish =
          optimize_within_permutation(params, realized(params, ArrivalProfile{a}));
      if (!polish || polish->total >= value - 1e-12) break;
      a = polish->profile.times;
      value = descend(params, a);
    }
    if (value < best.total) {
      best.total = value;
      best.profile = ArrivalProfile{a};
    }
  }
  best.total = total_cost(params, best.profile);
  best.permutation = realized(params, best.profile);
  return best;
}

OptimumResult social_optimum(const GameParams& params, int restarts,
                             std::uint64_t seed, int cap) {
  params.validate();
  if (params.n <= cap) return exhaustive_optimum(params, cap);
  return heuristic_optimum(params, restarts, seed);
}

}  // namespace lsgame
