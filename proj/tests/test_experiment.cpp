#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lsgame/dynamics.hpp"
#include "lsgame/experiment.hpp"
#include "oracles.hpp"

using namespace lsgame;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("lsgame_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

json small_config() {
  return json::parse(R"({
    "params": {"n": 5, "beta": 1.0, "alpha": {"beta_over_n": 0.7},
               "gamma": {"over_n": 1.0},
               "d_star": {"normal_quantiles": {"mean": 0.0, "variance": 1.0}}},
    "rbr": {"runs": 4},
    "seed": 12,
    "outputs": ["poa", "schedules", "trajectory"]
  })");
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("normal quantile targets") {
  CHECK(quantile_targets(1, 0.0, 1.0) == std::vector<double>{0.0});
  const auto three = quantile_targets(3, 0.0, 1.0);
  CHECK(three[0] == doctest::Approx(oracle::normal_quantile(0.25)).epsilon(1e-10));
  CHECK(three[1] == 0.0);
  CHECK(three[2] == -three[0]);
  const auto twenty = quantile_targets(20, 0.0, 0.16);
  CHECK(twenty.back() == doctest::Approx(0.4 * oracle::normal_quantile(20.0 / 21.0)).epsilon(1e-10));
  CHECK(twenty.front() == -twenty.back());
  CHECK(std::is_sorted(twenty.begin(), twenty.end()));
  const auto shifted = quantile_targets(4, 2.0, 4.0);
  CHECK(shifted[3] == doctest::Approx(2.0 + 2.0 * oracle::normal_quantile(0.8)).epsilon(1e-10));
  CHECK_THROWS_AS(quantile_targets(3, 0.0, 0.0), InvalidInput);
  CHECK_THROWS_AS(quantile_targets(0, 0.0, 1.0), InvalidInput);
}

TEST_CASE("parameter rules") {
  const auto p = parse_params(small_config().at("params"));
  CHECK(p.n == 5);
  CHECK(p.alpha == doctest::Approx(0.14));
  CHECK(p.gamma == doctest::Approx(0.2));
  CHECK(p.d_star.size() == 5);
  const auto q = parse_params(json::parse(R"({"beta": 2, "alpha": 0.1, "gamma": 0.5,
                                              "d_star": [0, 1]})"));
  CHECK(q.n == 2);
  CHECK(q.alpha == 0.1);
  const auto zeros = parse_params(json::parse(R"({"n": 3})"));
  CHECK(zeros.d_star == std::vector<double>(3, 0.0));
  CHECK_THROWS_AS(parse_params(json::parse(R"({"n": 2, "delta": 1})")), InvalidInput);
  CHECK_THROWS_AS(parse_params(json::parse(R"({"n": 2, "alpha": {"per_user": 1}})")),
                  InvalidInput);
  CHECK_THROWS_AS(parse_params(json::parse(R"({"n": 3, "d_star": [0, 1]})")), InvalidInput);
  CHECK_THROWS_AS(parse_params(json::parse(R"({"n": 2, "alpha": 1.2})")), InvalidInput);
}

TEST_CASE("experiment config parsing") {
  const auto c = ExperimentConfig::from_json(small_config());
  CHECK(c.runs == 4);
  CHECK(c.seed == 12);
  CHECK(c.optimum == "auto");
  CHECK(c.outputs.count("trajectory") == 1);
  auto bad = small_config();
  bad["extra"] = 1;
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), InvalidInput);
  bad = small_config();
  bad["outputs"] = {"pictures"};
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), InvalidInput);
  bad = small_config();
  bad["optimum"] = {{"method", "annealing"}};
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), InvalidInput);
  bad = small_config();
  bad["rbr"]["improvement_threshold"] = -1.0;
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), InvalidInput);
}

TEST_CASE("config files") {
  const auto dir = scratch("files");
  std::filesystem::create_directories(dir);
  const auto missing = dir / "nope.json";
  try {
    ExperimentConfig::load(missing);
    FAIL("expected an error");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("nope.json") != std::string::npos);
  }
  {
    std::ofstream f(dir / "broken.json");
    f << "{\"params\": ";
  }
  CHECK_THROWS_AS(ExperimentConfig::load(dir / "broken.json"), InvalidInput);
  std::filesystem::remove_all(dir);
}

TEST_CASE("a single user run") {
  const auto c = ExperimentConfig::from_json(json::parse(R"({
    "params": {"beta": 2.0, "alpha": 0.0, "gamma": 0.5, "d_star": [1.0]},
    "rbr": {"runs": 3}, "outputs": ["poa"]})"));
  const auto art = run_experiment(c);
  CHECK(art.report.converged_count == 3);
  CHECK(art.equilibrium[0] == doctest::Approx(0.5));
  CHECK(art.summary["eq_total"].get<double>() == doctest::Approx(0.25));
  CHECK(art.summary["poa"].get<double>() == doctest::Approx(1.0));
  CHECK(art.summary["distinct_cne"] == 1);
}

TEST_CASE("artifacts") {
  const auto c = ExperimentConfig::from_json(small_config());
  const auto art = run_experiment(c);
  const auto dir = scratch("artifacts");
  const auto written = write_artifacts(art, c, dir);
  CHECK(written.size() == 5);

  const auto summary = json::parse(slurp(dir / "summary.json"));
  std::set<std::string> keys;
  for (const auto& [k, v] : summary.items()) keys.insert(k);
  CHECK(keys == std::set<std::string>{"runs", "converged", "iter_mean", "iter_min",
                                      "iter_max", "distinct_cne", "max_l1_distance",
                                      "max_user_distance", "eq_total", "eq_deviation_avg",
                                      "eq_travel_avg", "poa", "opt_total",
                                      "opt_deviation_avg", "opt_travel_avg"});
  CHECK(summary["poa"].get<double>() >= 1.0 - 1e-12);

  const auto sched = lines(slurp(dir / "schedule_equilibrium.csv"));
  REQUIRE(sched.size() == 6);
  CHECK(sched[0] == "user,a,d,d_star,sojourn,cost");
  const auto traj = lines(slurp(dir / "trajectory_optimum.csv"));
  CHECK(traj[0] == "t,q");
  CHECK(traj.size() == 11);

  // Departures survive the text round trip.
  const auto d = solve_departures(c.params, art.equilibrium);
  for (std::size_t i = 0; i < 5; ++i) {
    std::istringstream row(sched[i + 1]);
    std::string cell;
    std::vector<double> v;
    while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
    CHECK(v[0] == static_cast<double>(i + 1));
    CHECK(v[2] == doctest::Approx(d[i]).epsilon(1e-8));
  }

  // Identical reruns produce identical bytes.
  const auto dir2 = scratch("artifacts2");
  write_artifacts(run_experiment(c), c, dir2);
  for (const auto& p : written) CHECK(slurp(p) == slurp(dir2 / p.filename()));

  const json j = art.summary;
  CHECK(json::parse(j.dump())["eq_total"].get<double>() == j["eq_total"].get<double>());
  // JSON output keeps full precision.
  const auto back = json::parse(json(d.times).dump()).get<std::vector<double>>();
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(back[i] - d[i]) <= 1e-12);
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(dir2);
}

TEST_CASE("summary without an optimum has null optimum fields") {
  auto cfg = small_config();
  cfg["outputs"] = {"table1-summary"};
  const auto art = run_experiment(ExperimentConfig::from_json(cfg));
  CHECK(art.summary["poa"].is_null());
  CHECK(art.summary["opt_total"].is_null());
  CHECK_FALSE(art.optimum);
}

TEST_CASE("number formatting") {
  CHECK(format_number(1.125) == "1.125");
  CHECK(format_number(-0.5) == "-0.5");
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
}

}  // TEST_SUITE
