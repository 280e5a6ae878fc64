#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace lsgame::qp {

/// minimize 1/2 x'Hx + g'x  subject to  C x >= b  (one row per constraint).
struct Problem {
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  Eigen::MatrixXd C;
  Eigen::VectorXd b;
};

struct Solution {
  Eigen::VectorXd x;
  double objective = 0.0;
  std::vector<int> active;  // rows of C binding at x
  int iterations = 0;
};

/// Dual active-set method of Goldfarb and Idnani for strictly convex H.
///
/// Returns nullopt when the constraints admit no point. Throws SolverError
/// if H is not positive definite or the iteration limit is reached.
std::optional<Solution> solve(const Problem& problem, double tolerance = 1e-10);

}  // namespace lsgame::qp
