// Command-line front end for the lsgame library.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lsgame/cost.hpp"
#include "lsgame/dynamics.hpp"
#include "lsgame/equilibrium.hpp"
#include "lsgame/experiment.hpp"
#include "lsgame/social.hpp"
#include "lsgame/two_user.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lsgame;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::string> format;
  std::optional<int> max_iter;
  std::optional<double> beta, alpha, gamma;
  std::vector<double> d_star;
  std::vector<double> arrivals;
  std::optional<int> user;
  std::optional<int> runs;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "JSON config file");
  sub->add_option("--seed", o.seed, "Base seed (overrides the config)");
  sub->add_option("--out", o.out, "Output directory (default: stdout)");
  sub->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--max-iter", o.max_iter, "Best-response sweep limit");
}

// dynamics defaults to CSV, every other subcommand to JSON.
bool csv(const Options& o) { return o.format.value_or("json") == "csv"; }

void add_params(CLI::App* sub, Options& o) {
  sub->add_option("--beta", o.beta, "Free-flow speed");
  sub->add_option("--alpha", o.alpha, "Slowdown per extra user");
  sub->add_option("--gamma", o.gamma, "Travel-time cost weight");
  sub->add_option("--d-star", o.d_star, "Desired departure times")->delimiter(',');
}

// Config file (if any) with command-line overrides applied.
json merged_config(const Options& o, std::size_t default_n) {
  json j = o.config.empty() ? json::object() : read_json_file(o.config);
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  json& p = j["params"];
  if (p.is_null()) p = json::object();
  if (o.beta) p["beta"] = *o.beta;
  if (o.alpha) p["alpha"] = *o.alpha;
  if (o.gamma) p["gamma"] = *o.gamma;
  if (!o.d_star.empty()) p["d_star"] = o.d_star;
  if (!o.arrivals.empty()) j["arrivals"] = o.arrivals;
  if (o.user) j["user"] = *o.user;
  if (o.seed) j["seed"] = *o.seed;
  if (o.max_iter) j["rbr"]["max_iterations"] = *o.max_iter;
  if (o.runs) j["rbr"]["runs"] = *o.runs;
  if (!p.contains("d_star") && !p.contains("n")) {
    std::size_t n = default_n;
    if (j.contains("arrivals")) n = j["arrivals"].size();
    if (n == 0) throw InvalidInput("desired departure times (--d-star) are required");
    p["d_star"] = std::vector<double>(n, 0.0);
  }
  return j;
}

ArrivalProfile arrivals_of(const json& j, const GameParams& params) {
  if (!j.contains("arrivals")) throw InvalidInput("arrival times (--arrivals) are required");
  ArrivalProfile a{j.at("arrivals").get<std::vector<double>>()};
  if (a.size() != static_cast<std::size_t>(params.n)) {
    throw InvalidInput("expected " + std::to_string(params.n) + " arrival times");
  }
  return a;
}

class Sink {
public:
  explicit Sink(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) fs::create_directories(dir_);
  }
  void emit(const std::string& name, const std::string& body) {
    if (dir_.empty()) {
      std::cout << body;
      return;
    }
    const fs::path path = fs::path(dir_) / name;
    std::ofstream f(path);
    if (!f) throw InvalidInput("cannot write '" + path.string() + "'");
    f << body;
  }

private:
  std::string dir_;
};

std::string csv_of(const std::vector<ScheduleRow>& rows) {
  std::ostringstream s;
  write_schedule_csv(s, rows);
  return s.str();
}

json schedule_json(const std::vector<ScheduleRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"user", r.user}, {"a", r.a}, {"d", r.d}, {"d_star", r.d_star},
                   {"sojourn", r.sojourn}, {"cost", r.cost}});
  }
  return out;
}

int run_dynamics(const Options& o) {
  const json j = merged_config(o, 0);
  const GameParams params = parse_params(j.at("params"));
  const ArrivalProfile a = arrivals_of(j, params);
  if (!a.ordered()) throw InvalidInput("arrival times must be non-decreasing");
  const DepartureProfile d = solve_departures(params, a);
  const auto rows = schedule_rows(params, a);
  const SystemTrajectory traj = queue_trajectory(a, d);
  Sink sink(o.out);
  if (csv(o)) {
    sink.emit("schedule.csv", csv_of(rows));
    if (!o.out.empty()) {
      std::ostringstream t;
      write_trajectory_csv(t, traj);
      sink.emit("trajectory.csv", t.str());
    }
  } else {
    json t = json::array();
    for (const auto& e : traj.events) t.push_back({{"t", e.t}, {"q", e.q}});
    json out{{"departures", d.times},
             {"permutation", permutation_of(params, a, d).k},
             {"schedule", schedule_json(rows)},
             {"trajectory", t}};
    sink.emit("dynamics.json", out.dump(2) + "\n");
  }
  return 0;
}

int run_best_response(const Options& o) {
  const json j = merged_config(o, 0);
  const GameParams params = parse_params(j.at("params"));
  const ArrivalProfile a = arrivals_of(j, params);
  if (!j.contains("user")) throw InvalidInput("--user is required");
  const int user = j.at("user").get<int>();
  if (user < 1 || user > params.n) throw InvalidInput("--user must be in 1..n");
  const auto br = best_response(params, a, static_cast<std::size_t>(user - 1));
  Sink sink(o.out);
  if (csv(o)) {
    std::string body = "minimizer,cost\n";
    for (std::size_t m = 0; m < br.minimizers.size(); ++m) {
      body += format_number(br.minimizers[m]) + "," + format_number(br.costs[m]) + "\n";
    }
    sink.emit("best_response.csv", body);
  } else {
    json out{{"user", user},
             {"minimizers", br.minimizers},
             {"costs", br.costs},
             {"min_cost", br.min_cost},
             {"segments_scanned", br.segments_scanned}};
    sink.emit("best_response.json", out.dump(2) + "\n");
  }
  return 0;
}

json set_json(const two_user::EquilibriumSet2& s) {
  json pts = json::array();
  for (const auto& p : s.points) pts.push_back({p.a1, p.a2});
  json out{{"kind", two_user::to_string(s.kind)}, {"points", pts}};
  if (s.interval) {
    out["a2_interval"] = {s.interval->first, s.interval->second};
    out["a1_offset"] = -s.free_flow_time;
  }
  return out;
}

int run_two_user(const Options& o) {
  const json j = merged_config(o, 2);
  const GameParams params = parse_params(j.at("params"));
  const auto spne = two_user::spne(params);
  const auto cne = two_user::cne(params);
  Sink sink(o.out);
  if (csv(o)) {
    std::string body = "concept,kind,a1,a2,a2_lo,a2_hi\n";
    auto rows = [&](const char* name, const two_user::EquilibriumSet2& s) {
      const std::string kind = two_user::to_string(s.kind);
      for (const auto& p : s.points) {
        body += std::string(name) + "," + kind + "," + format_number(p.a1) + "," +
                format_number(p.a2) + ",,\n";
      }
      if (s.interval) {
        body += std::string(name) + "," + kind + ",,," +
                format_number(s.interval->first) + "," +
                format_number(s.interval->second) + "\n";
      }
    };
    rows("spne", spne);
    rows("cne", cne);
    sink.emit("two_user.csv", body);
  } else {
    json paths = json::array();
    for (const auto& p : spne.points) {
      const std::vector<double> a{p.a1, p.a2};
      paths.push_back({{"arrivals", a}, {"costs", user_costs(params, a)}});
    }
    json out{{"spne", set_json(spne)}, {"spne_paths", paths}, {"cne", set_json(cne)}};
    sink.emit("two_user.json", out.dump(2) + "\n");
  }
  return 0;
}

ExperimentConfig experiment_config(const Options& o) {
  ExperimentConfig c = ExperimentConfig::from_json(merged_config(o, 0));
  return c;
}

int run_equilibrium(const Options& o) {
  ExperimentConfig c = experiment_config(o);
  c.optimum = "none";
  const RunArtifacts art = run_experiment(c);
  Sink sink(o.out);
  if (csv(o)) {
    sink.emit("schedule_equilibrium.csv", csv_of(art.eq_schedule));
  } else {
    json eqs = json::array();
    for (const auto& e : art.report.distinct_equilibria) {
      eqs.push_back({{"arrivals", e.profile.times},
                     {"total_cost", e.total()},
                     {"iterations", e.iterations},
                     {"seed", e.seed}});
    }
    json runs = json::array();
    for (const auto& e : art.report.outcomes) {
      runs.push_back({{"seed", e.seed},
                      {"iterations", e.iterations},
                      {"converged", e.converged},
                      {"looped", e.looped}});
    }
    json out{{"summary", art.summary},
             {"distinct_equilibria", eqs},
             {"runs", runs},
             {"schedule", schedule_json(art.eq_schedule)}};
    sink.emit("equilibrium.json", out.dump(2) + "\n");
  }
  return 0;
}

int run_social_opt(const Options& o) {
  const json j = merged_config(o, 0);
  const ExperimentConfig c = ExperimentConfig::from_json(j);
  const std::string method = c.optimum == "none" ? "auto" : c.optimum;
  OptimumResult opt;
  if (method == "exhaustive") {
    opt = exhaustive_optimum(c.params);
  } else if (method == "heuristic") {
    opt = heuristic_optimum(c.params, c.restarts, c.seed);
  } else {
    opt = social_optimum(c.params, c.restarts, c.seed);
  }
  const auto rows = schedule_rows(c.params, opt.profile);
  Sink sink(o.out);
  if (csv(o)) {
    sink.emit("schedule_optimum.csv", csv_of(rows));
  } else {
    json out{{"method", opt.method},
             {"total", opt.total},
             {"arrivals", opt.profile.times},
             {"permutation", opt.permutation.k},
             {"schedule", schedule_json(rows)}};
    if (!opt.certificates.empty()) {
      json certs = json::array();
      for (const auto& cert : opt.certificates) {
        certs.push_back({{"k", cert.permutation.k},
                         {"total", cert.total ? json(*cert.total) : json(nullptr)}});
      }
      out["certificates"] = certs;
    }
    sink.emit("social_optimum.json", out.dump(2) + "\n");
  }
  return 0;
}

int run_experiment_cmd(const Options& o) {
  if (o.config.empty()) throw InvalidInput("experiment needs --config <path>");
  const ExperimentConfig c = experiment_config(o);
  const RunArtifacts art = run_experiment(c);
  const fs::path dir = o.out.empty() ? fs::path("results") : fs::path(o.out);
  for (const auto& p : write_artifacts(art, c, dir)) std::cerr << "wrote " << p.string() << '\n';
  std::cout << art.summary.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arrival game with linear slowdown: dynamics, best responses, equilibria, optima"};
  app.require_subcommand(1);
  app.fallthrough(false);

  Options o;
  auto* dyn = app.add_subcommand("dynamics", "Departures and queue trajectory for given arrivals");
  add_common(dyn, o);
  add_params(dyn, o);
  dyn->add_option("--arrivals", o.arrivals, "Ordered arrival times")->delimiter(',');

  auto* brc = app.add_subcommand("best-response", "Best responses of one user");
  add_common(brc, o);
  add_params(brc, o);
  brc->add_option("--arrivals", o.arrivals, "Arrival times")->delimiter(',');
  brc->add_option("--user", o.user, "User index (1-based)");

  auto* two = app.add_subcommand("two-user", "Closed-form SPNE and CNE for two users");
  add_common(two, o);
  add_params(two, o);

  auto* eq = app.add_subcommand("equilibrium", "Repeated best response from random starts");
  add_common(eq, o);
  add_params(eq, o);
  eq->add_option("--runs", o.runs, "Number of initial profiles");

  auto* soc = app.add_subcommand("social-opt", "Socially optimal arrival profile");
  add_common(soc, o);
  add_params(soc, o);

  auto* exp = app.add_subcommand("experiment", "Full experiment from a config file");
  add_common(exp, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*dyn) {
      if (!o.format) o.format = "csv";
      return run_dynamics(o);
    }
    if (*brc) return run_best_response(o);
    if (*two) return run_two_user(o);
    if (*eq) return run_equilibrium(o);
    if (*soc) return run_social_opt(o);
    if (*exp) return run_experiment_cmd(o);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad config value: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
