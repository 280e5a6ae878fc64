#include "lsgame/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "lsgame/cost.hpp"
#include "lsgame/rng.hpp"

namespace lsgame {

double Rng::normal() {
  constexpr double two_pi = 6.283185307179586476925286766559;
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void BRConfig::validate() const {
  if (max_iterations <= 0) throw InvalidInput("max_iterations must be positive");
  if (!(improvement_threshold > 0.0)) {
    throw InvalidInput("improvement_threshold must be positive");
  }
  if (!(fixpoint_tolerance > 0.0)) {
    throw InvalidInput("fixpoint_tolerance must be positive");
  }
}

double EquilibriumOutcome::total() const {
  return std::accumulate(costs.begin(), costs.end(), 0.0);
}

InitialScheme parse_scheme(const std::string& name) {
  if (name == "uniform-order-stat") return InitialScheme::UniformOrderStat;
  if (name == "normal-around-target") return InitialScheme::NormalAroundTarget;
  throw InvalidInput("unknown initial scheme '" + name + "'");
}

std::string to_string(InitialScheme scheme) {
  return scheme == InitialScheme::UniformOrderStat ? "uniform-order-stat"
                                                   : "normal-around-target";
}

ArrivalProfile clamp_order(std::span<const double> raw) {
  ArrivalProfile out{std::vector<double>(raw.begin(), raw.end())};
  for (std::size_t i = 1; i < out.times.size(); ++i) {
    out.times[i] = std::max(out.times[i], out.times[i - 1]);
  }
  return out;
}

StepResult br_step(const GameParams& params, const ArrivalProfile& profile,
                   const BRConfig& config) {
  params.validate();
  config.validate();
  if (profile.size() != static_cast<std::size_t>(params.n)) {
    throw InvalidInput("profile size does not match n");
  }
  if (!profile.ordered()) throw InvalidInput("profile must be ordered");

  std::vector<double> cur = profile.times;
  StepResult step;
  step.min_improvement = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cur.size(); ++i) {
    const SearchInterval range = search_interval(params, cur, i);
    const BestResponseResult br =
        best_response_in(params, cur, i, Objective::OwnCost, range.lo, range.hi);
    const bool feasible = cur[i] >= range.lo;
    bool keep = false;
    double current_cost = std::numeric_limits<double>::infinity();
    if (feasible) {
      current_cost = objective_value(params, cur, i, Objective::OwnCost);
      keep = current_cost <= br.min_cost + config.improvement_threshold;
      for (double m : br.minimizers) {
        if (std::abs(m - cur[i]) <= config.fixpoint_tolerance) keep = true;
      }
    }
    if (keep) continue;
    std::size_t pick = 0;
    while (br.costs[pick] > br.min_cost + config.improvement_threshold) ++pick;
    cur[i] = br.minimizers[pick];
    step.changed = true;
    ++step.updates;
    step.min_improvement = std::min(step.min_improvement, current_cost - br.costs[pick]);
  }
  step.profile = clamp_order(cur);
  return step;
}

EquilibriumOutcome br_run(const GameParams& params, const ArrivalProfile& initial,
                          const BRConfig& config, std::uint64_t seed) {
  params.validate();
  config.validate();
  EquilibriumOutcome out;
  out.seed = seed;
  out.profile = clamp_order(initial.times);

  auto fingerprint = [](const ArrivalProfile& p) {
    std::vector<long long> key(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) key[i] = std::llround(p[i] * 1e12);
    return key;
  };
  std::set<std::vector<long long>> seen{fingerprint(out.profile)};

  for (int it = 1; it <= config.max_iterations; ++it) {
    StepResult step = br_step(params, out.profile, config);
    out.iterations = it;
    if (!step.changed) {
      out.converged = true;
      break;
    }
    out.profile = std::move(step.profile);
    if (!seen.insert(fingerprint(out.profile)).second) {
      out.looped = true;
      break;
    }
  }
  out.costs = user_costs(params, out.profile.times);
  return out;
}

double l1_distance(const ArrivalProfile& x, const ArrivalProfile& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
  return s;
}

double linf_distance(const ArrivalProfile& x, const ArrivalProfile& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s = std::max(s, std::abs(x[i] - y[i]));
  return s;
}

RBRReport rbr(const GameParams& params, std::span<const ArrivalProfile> initials,
              const BRConfig& config, std::span<const std::uint64_t> seeds) {
  if (initials.empty()) throw InvalidInput("rbr needs at least one initial profile");
  if (!seeds.empty() && seeds.size() != initials.size()) {
    throw InvalidInput("one seed per initial profile expected");
  }
  RBRReport report;
  report.runs = static_cast<int>(initials.size());
  for (std::size_t r = 0; r < initials.size(); ++r) {
    const std::uint64_t seed = seeds.empty() ? r : seeds[r];
    report.outcomes.push_back(br_run(params, initials[r], config, seed));
  }

  long long iter_sum = 0;
  report.iterations.min = std::numeric_limits<int>::max();
  report.iterations.max = 0;
  std::vector<const EquilibriumOutcome*> converged;
  for (const auto& o : report.outcomes) {
    iter_sum += o.iterations;
    report.iterations.min = std::min(report.iterations.min, o.iterations);
    report.iterations.max = std::max(report.iterations.max, o.iterations);
    if (o.converged) converged.push_back(&o);
  }
  report.iterations.mean = static_cast<double>(iter_sum) / report.runs;
  report.converged_count = static_cast<int>(converged.size());

  for (const auto* o : converged) {
    const bool known = std::any_of(
        report.distinct_equilibria.begin(), report.distinct_equilibria.end(),
        [&](const EquilibriumOutcome& rep) {
          return linf_distance(rep.profile, o->profile) <= kClusterTolerance;
        });
    if (!known) report.distinct_equilibria.push_back(*o);
  }
  for (std::size_t x = 0; x < converged.size(); ++x) {
    for (std::size_t y = x + 1; y < converged.size(); ++y) {
      report.max_profile_distance = std::max(
          report.max_profile_distance,
          l1_distance(converged[x]->profile, converged[y]->profile));
      report.max_user_distance = std::max(
          report.max_user_distance,
          linf_distance(converged[x]->profile, converged[y]->profile));
    }
  }
  return report;
}

std::vector<ArrivalProfile> generate_initials(const GameParams& params, int count,
                                              InitialScheme scheme,
                                              std::uint64_t seed) {
  params.validate();
  if (count <= 0) throw InvalidInput("count must be positive");
  std::vector<ArrivalProfile> out;
  out.reserve(count);
  for (int c = 0; c < count; ++c) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    std::vector<double> a(params.n);
    if (scheme == InitialScheme::UniformOrderStat) {
      for (double& x : a) x = rng.uniform(-1.0, 1.0);
      std::sort(a.begin(), a.end());
    } else {
      const double variance = 2.0 * (1.0 - rng.uniform());  // (0, 2]
      const double sd = std::sqrt(variance);
      for (int i = 0; i < params.n; ++i) {
        a[i] = rng.normal(params.d_star[i] - params.free_flow_time(), sd);
      }
    }
    out.push_back(clamp_order(a));
  }
  return out;
}

std::vector<ArrivalProfile> mixed_initials(const GameParams& params, int count,
                                           std::uint64_t seed) {
  if (count <= 0) throw InvalidInput("count must be positive");
  const int uniform = count / 2;
  std::vector<ArrivalProfile> out;
  if (uniform > 0) {
    out = generate_initials(params, uniform, InitialScheme::UniformOrderStat, seed);
  }
  auto normal = generate_initials(params, count - uniform,
                                  InitialScheme::NormalAroundTarget,
                                  derive_seed(seed, 0xA5A5A5A5ULL));
  out.insert(out.end(), normal.begin(), normal.end());
  return out;
}

double price_of_anarchy(const GameParams& params,
                        std::span<const EquilibriumOutcome> equilibria,
                        const ArrivalProfile& optimum) {
  double worst = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& e : equilibria) {
    if (!e.converged) continue;
    any = true;
    worst = std::max(worst, total_cost(params, e.profile));
  }
  if (!any) throw InvalidInput("price of anarchy needs a converged equilibrium");
  return worst / total_cost(params, optimum);
}

}  // namespace lsgame
