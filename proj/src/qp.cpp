#include "lsgame/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lsgame/types.hpp"

namespace lsgame::qp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::optional<Solution> solve(const Problem& pr, double tolerance) {
  const Eigen::Index n = pr.H.rows();
  const Eigen::Index m = pr.C.rows();
  if (pr.H.cols() != n || pr.g.size() != n || (m > 0 && pr.C.cols() != n) ||
      pr.b.size() != m) {
    throw InvalidInput("qp: inconsistent dimensions");
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(pr.H);
  if (llt.info() != Eigen::Success) throw SolverError("qp: Hessian not positive definite");
  const Eigen::MatrixXd Hinv = llt.solve(Eigen::MatrixXd::Identity(n, n));

  Solution sol;
  Eigen::VectorXd x = -Hinv * pr.g;
  std::vector<int> active;
  std::vector<double> u;  // multipliers of `active`

  const int limit = static_cast<int>(50 * (m + n) + 1000);
  int iter = 0;
  auto slack = [&](Eigen::Index i) { return pr.C.row(i).dot(x) - pr.b(i); };

  while (true) {
    // Most violated constraint not yet active.
    Eigen::Index p = -1;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::find(active.begin(), active.end(), i) != active.end()) continue;
      const double s = slack(i);
      const double scale = 1.0 + std::abs(pr.b(i)) + pr.C.row(i).lpNorm<1>();
      if (s < -tolerance * scale && s < worst) {
        worst = s;
        p = i;
      }
    }
    if (p < 0) break;

    const Eigen::VectorXd np = pr.C.row(p).transpose();
    double up = 0.0;
    while (true) {
      if (++iter > limit) throw SolverError("qp: iteration limit reached");
      const Eigen::Index q = static_cast<Eigen::Index>(active.size());
      Eigen::VectorXd z = Hinv * np;
      Eigen::VectorXd r(q);
      if (q > 0) {
        Eigen::MatrixXd N(n, q);
        for (Eigen::Index j = 0; j < q; ++j) N.col(j) = pr.C.row(active[j]).transpose();
        const Eigen::MatrixXd HN = Hinv * N;
        const Eigen::MatrixXd M = N.transpose() * HN;
        r = M.fullPivLu().solve(N.transpose() * z);
        z -= HN * r;
      }

      // Partial step: largest move keeping every active multiplier >= 0.
      double t1 = kInf;
      Eigen::Index drop = -1;
      for (Eigen::Index j = 0; j < q; ++j) {
        if (r(j) > 0.0) {
          const double t = u[j] / r(j);
          if (t < t1) {
            t1 = t;
            drop = j;
          }
        }
      }
      // Full step: makes constraint p binding.
      const double zn = z.dot(np);
      const double t2 = (zn > 1e-14 * (1.0 + np.squaredNorm())) ? -slack(p) / zn : kInf;
      const double t = std::min(t1, t2);
      if (t == kInf) return std::nullopt;

      if (t2 < kInf) x += t * z;
      for (Eigen::Index j = 0; j < q; ++j) u[j] -= t * r(j);
      up += t;
      if (t2 <= t1) {
        active.push_back(static_cast<int>(p));
        u.push_back(up);
        break;
      }
      active.erase(active.begin() + drop);
      u.erase(u.begin() + drop);
    }
  }

  sol.x = x;
  sol.objective = 0.5 * x.dot(pr.H * x) + pr.g.dot(x);
  sol.iterations = iter;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::abs(slack(i)) <= tolerance * (1.0 + std::abs(pr.b(i)))) {
      sol.active.push_back(static_cast<int>(i));
    }
  }
  return sol;
}

}  // namespace lsgame::qp
