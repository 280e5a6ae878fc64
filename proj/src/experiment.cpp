#include "lsgame/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <boost/math/distributions/normal.hpp>

#include "lsgame/cost.hpp"
#include "lsgame/dynamics.hpp"
#include "lsgame/rng.hpp"

namespace lsgame {

using nlohmann::json;

std::vector<double> quantile_targets(int n, double mean, double variance) {
  if (n <= 0) throw InvalidInput("quantile_targets needs n >= 1");
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw InvalidInput("variance must be positive and finite");
  }
  if (!std::isfinite(mean)) throw InvalidInput("mean must be finite");
  const boost::math::normal_distribution<double> dist(mean, std::sqrt(variance));
  std::vector<double> out(n);
  for (int i = 1; i <= n; ++i) {
    out[i - 1] = boost::math::quantile(dist, static_cast<double>(i) / (n + 1));
  }
  // Exact symmetry about the mean, so the median user sits on it.
  for (int i = 0; i < n / 2; ++i) {
    const double half = 0.5 * ((mean - out[i]) + (out[n - 1 - i] - mean));
    out[i] = mean - half;
    out[n - 1 - i] = mean + half;
  }
  if (n % 2 == 1) out[n / 2] = mean;
  return out;
}

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const std::string& where) {
  if (!j.is_object()) throw InvalidInput(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    const bool ok = std::any_of(known.begin(), known.end(),
                                [&](const char* k) { return key == k; });
    if (!ok) throw InvalidInput("unknown key '" + key + "' in " + where);
  }
}

double rule_value(const json& j, const char* name, const char* rule, double scale) {
  if (j.is_number()) return j.get<double>();
  if (j.is_object() && j.size() == 1 && j.contains(rule) && j.at(rule).is_number()) {
    return j.at(rule).get<double>() * scale;
  }
  throw InvalidInput(std::string(name) + " must be a number or {\"" + rule + "\": f}");
}

}  // namespace

GameParams parse_params(const json& j) {
  reject_unknown(j, {"n", "beta", "alpha", "gamma", "d_star"}, "params");
  GameParams p;
  p.beta = get_or(j, "beta", 1.0);
  int n = 0;
  if (j.contains("n")) n = get_or(j, "n", 0);
  const json ds = j.contains("d_star") ? j.at("d_star") : json();
  if (ds.is_array()) {
    p.d_star = ds.get<std::vector<double>>();
    if (n == 0) n = static_cast<int>(p.d_star.size());
    if (n != static_cast<int>(p.d_star.size())) {
      throw InvalidInput("params.n does not match the length of d_star");
    }
  } else if (ds.is_object()) {
    reject_unknown(ds, {"normal_quantiles"}, "params.d_star");
    const json& q = ds.at("normal_quantiles");
    reject_unknown(q, {"mean", "variance"}, "normal_quantiles");
    if (n <= 0) throw InvalidInput("params.n is required with normal_quantiles");
    p.d_star = quantile_targets(n, get_or(q, "mean", 0.0), get_or(q, "variance", 1.0));
  } else if (ds.is_null()) {
    if (n <= 0) throw InvalidInput("params needs n or d_star");
    p.d_star.assign(n, 0.0);
  } else {
    throw InvalidInput("params.d_star must be a list or a generator object");
  }
  p.n = n;
  p.alpha = j.contains("alpha")
                ? rule_value(j.at("alpha"), "alpha", "beta_over_n", p.beta / n)
                : 0.0;
  p.gamma = j.contains("gamma")
                ? rule_value(j.at("gamma"), "gamma", "over_n", 1.0 / n)
                : 0.0;
  p.validate();
  return p;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  reject_unknown(j, {"params", "rbr", "seed", "optimum", "outputs", "arrivals", "user"},
                 "config");
  if (!j.contains("params")) throw InvalidInput("config needs a params object");
  ExperimentConfig c;
  c.params = parse_params(j.at("params"));
  c.seed = get_or<std::uint64_t>(j, "seed", 0);
  if (j.contains("rbr")) {
    const json& r = j.at("rbr");
    reject_unknown(r,
                   {"runs", "scheme", "max_iterations", "improvement_threshold",
                    "fixpoint_tolerance"},
                   "rbr");
    c.runs = get_or(r, "runs", c.runs);
    c.scheme = get_or(r, "scheme", c.scheme);
    c.br.max_iterations = get_or(r, "max_iterations", c.br.max_iterations);
    c.br.improvement_threshold =
        get_or(r, "improvement_threshold", c.br.improvement_threshold);
    c.br.fixpoint_tolerance = get_or(r, "fixpoint_tolerance", c.br.fixpoint_tolerance);
  }
  if (j.contains("outputs")) {
    c.outputs.clear();
    for (const auto& o : j.at("outputs")) {
      const auto name = o.get<std::string>();
      static const std::set<std::string> known{"schedules", "costs", "trajectory",
                                               "table1-summary", "poa"};
      if (!known.count(name)) throw InvalidInput("unknown output '" + name + "'");
      c.outputs.insert(name);
    }
  }
  if (c.outputs.count("poa")) c.optimum = "auto";
  if (j.contains("optimum")) {
    const json& o = j.at("optimum");
    reject_unknown(o, {"method", "restarts"}, "optimum");
    c.optimum = get_or(o, "method", c.optimum);
    c.restarts = get_or(o, "restarts", c.restarts);
  }
  if (c.runs <= 0) throw InvalidInput("rbr.runs must be positive");
  if (c.scheme != "table1") parse_scheme(c.scheme);
  if (c.optimum != "none" && c.optimum != "auto" && c.optimum != "exhaustive" &&
      c.optimum != "heuristic") {
    throw InvalidInput("unknown optimum method '" + c.optimum + "'");
  }
  if (c.restarts <= 0) throw InvalidInput("optimum.restarts must be positive");
  c.br.validate();
  return c;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("malformed config file '" + path.string() + "': " + e.what());
  }
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  return from_json(read_json_file(path));
}

std::vector<ScheduleRow> schedule_rows(const GameParams& params,
                                       const ArrivalProfile& arrivals) {
  const DepartureProfile d = solve_departures(params, arrivals);
  const std::vector<double> costs = user_costs(params, arrivals.times);
  std::vector<ScheduleRow> rows(arrivals.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i] = {static_cast<int>(i) + 1, arrivals[i], d[i], params.d_star[i],
               d[i] - arrivals[i], costs[i]};
  }
  return rows;
}

CostSplit cost_split(const GameParams& params, const ArrivalProfile& arrivals) {
  CostSplit s;
  for (const auto& r : schedule_rows(params, arrivals)) {
    s.total += r.cost;
    s.deviation_avg += (r.d - r.d_star) * (r.d - r.d_star);
    s.travel_avg += params.gamma * r.sojourn;
  }
  s.deviation_avg /= params.n;
  s.travel_avg /= params.n;
  return s;
}

RunArtifacts run_experiment(const ExperimentConfig& config) {
  config.params.validate();
  config.br.validate();
  const GameParams& p = config.params;

  const std::vector<ArrivalProfile> initials =
      config.scheme == "table1"
          ? mixed_initials(p, config.runs, config.seed)
          : generate_initials(p, config.runs, parse_scheme(config.scheme), config.seed);
  std::vector<std::uint64_t> seeds(initials.size());
  for (std::size_t r = 0; r < seeds.size(); ++r) seeds[r] = derive_seed(config.seed, r);

  RunArtifacts art;
  art.report = rbr(p, initials, config.br, seeds);

  const EquilibriumOutcome* worst = nullptr;
  for (const auto& o : art.report.outcomes) {
    if (o.converged && (!worst || o.total() > worst->total())) worst = &o;
  }
  art.equilibrium = worst ? worst->profile : art.report.outcomes.front().profile;
  art.eq_schedule = schedule_rows(p, art.equilibrium);
  art.eq_trajectory = queue_trajectory(art.equilibrium, solve_departures(p, art.equilibrium));

  if (config.optimum == "exhaustive") {
    art.optimum = exhaustive_optimum(p);
  } else if (config.optimum == "heuristic") {
    art.optimum = heuristic_optimum(p, config.restarts, config.seed);
  } else if (config.optimum == "auto") {
    art.optimum = social_optimum(p, config.restarts, config.seed);
  }
  if (art.optimum) {
    art.opt_schedule = schedule_rows(p, art.optimum->profile);
    art.opt_trajectory =
        queue_trajectory(art.optimum->profile, solve_departures(p, art.optimum->profile));
  }

  json s;
  const RBRReport& rep = art.report;
  s["runs"] = rep.runs;
  s["converged"] = rep.converged_count;
  s["iter_mean"] = rep.iterations.mean;
  s["iter_min"] = rep.iterations.min;
  s["iter_max"] = rep.iterations.max;
  s["distinct_cne"] = rep.distinct_equilibria.size();
  s["max_l1_distance"] = rep.max_profile_distance;
  s["max_user_distance"] = rep.max_user_distance;
  const CostSplit eq = cost_split(p, art.equilibrium);
  s["eq_total"] = eq.total;
  s["eq_deviation_avg"] = eq.deviation_avg;
  s["eq_travel_avg"] = eq.travel_avg;
  s["poa"] = nullptr;
  s["opt_total"] = nullptr;
  s["opt_deviation_avg"] = nullptr;
  s["opt_travel_avg"] = nullptr;
  if (art.optimum) {
    const CostSplit opt = cost_split(p, art.optimum->profile);
    s["opt_total"] = opt.total;
    s["opt_deviation_avg"] = opt.deviation_avg;
    s["opt_travel_avg"] = opt.travel_avg;
    if (worst) s["poa"] = price_of_anarchy(p, rep.outcomes, art.optimum->profile);
  }
  art.summary = std::move(s);
  return art;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

void write_schedule_csv(std::ostream& out, const std::vector<ScheduleRow>& rows) {
  out << "user,a,d,d_star,sojourn,cost\n";
  for (const auto& r : rows) {
    out << r.user << ',' << format_number(r.a) << ',' << format_number(r.d) << ','
        << format_number(r.d_star) << ',' << format_number(r.sojourn) << ','
        << format_number(r.cost) << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const SystemTrajectory& trajectory) {
  out << "t,q\n";
  for (const auto& e : trajectory.events) out << format_number(e.t) << ',' << e.q << '\n';
}

std::vector<std::filesystem::path> write_artifacts(const RunArtifacts& art,
                                                   const ExperimentConfig& config,
                                                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto open = [&](const char* name) {
    const auto path = dir / name;
    std::ofstream f(path);
    if (!f) throw InvalidInput("cannot write '" + path.string() + "'");
    written.push_back(path);
    return f;
  };
  {
    auto f = open("summary.json");
    f << art.summary.dump(2) << '\n';
  }
  if (config.outputs.count("schedules") || config.outputs.count("costs")) {
    auto f = open("schedule_equilibrium.csv");
    write_schedule_csv(f, art.eq_schedule);
    if (art.optimum) {
      auto g = open("schedule_optimum.csv");
      write_schedule_csv(g, art.opt_schedule);
    }
  }
  if (config.outputs.count("trajectory")) {
    auto f = open("trajectory_equilibrium.csv");
    write_trajectory_csv(f, art.eq_trajectory);
    if (art.optimum) {
      auto g = open("trajectory_optimum.csv");
      write_trajectory_csv(g, art.opt_trajectory);
    }
  }
  return written;
}

}  // namespace lsgame
