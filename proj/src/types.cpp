#include "lsgame/types.hpp"

#include <algorithm>
#include <sstream>

namespace lsgame {

void GameParams::validate() const {
  if (n < 1) throw InvalidInput("n must be positive");
  if (!(beta > 0.0)) throw InvalidInput("beta must be > 0");
  if (!(alpha >= 0.0)) throw InvalidInput("alpha must be >= 0");
  if (!(gamma >= 0.0)) throw InvalidInput("gamma must be >= 0");
  if (!(beta - alpha * (n - 1) > 0.0)) {
    throw InvalidInput("beta - alpha (n - 1) must be > 0");
  }
  if (d_star.size() != static_cast<std::size_t>(n)) {
    throw InvalidInput("d_star must have n entries");
  }
  if (!std::is_sorted(d_star.begin(), d_star.end())) {
    throw InvalidInput("d_star must be non-decreasing");
  }
}

GameParams GameParams::shifted(double delta) const {
  GameParams out = *this;
  for (double& t : out.d_star) t += delta;
  return out;
}

GameParams GameParams::make(double beta, double alpha, double gamma,
                            std::vector<double> d_star) {
  GameParams p;
  p.n = static_cast<int>(d_star.size());
  p.beta = beta;
  p.alpha = alpha;
  p.gamma = gamma;
  p.d_star = std::move(d_star);
  p.validate();
  return p;
}

bool ArrivalProfile::ordered() const {
  return std::is_sorted(times.begin(), times.end());
}

std::string PermutationVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) os << ',';
    os << k[i];
  }
  os << ')';
  return os.str();
}

PermutationVector PermutationVector::from_k(std::vector<int> k) {
  PermutationVector p;
  const int n = static_cast<int>(k.size());
  p.h.resize(k.size());
  int j = 0;
  for (int i = 1; i <= n; ++i) {
    while (j < n && k[j] < i) ++j;
    p.h[i - 1] = j + 1;
  }
  p.k = std::move(k);
  return p;
}

int SystemTrajectory::peak() const {
  int best = 0;
  for (const auto& e : events) best = std::max(best, e.q);
  return best;
}

}  // namespace lsgame
