#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lsgame/cost.hpp"
#include "lsgame/dynamics.hpp"
#include "lsgame/equilibrium.hpp"
#include "lsgame/experiment.hpp"
#include "lsgame/social.hpp"
#include "lsgame/two_user.hpp"

namespace py = pybind11;
using namespace lsgame;

namespace {

py::dict set_dict(const two_user::EquilibriumSet2& s) {
  py::list pts;
  for (const auto& p : s.points) pts.append(py::make_tuple(p.a1, p.a2));
  py::dict d;
  d["kind"] = two_user::to_string(s.kind);
  d["points"] = pts;
  if (s.interval) {
    d["a2_interval"] = py::make_tuple(s.interval->first, s.interval->second);
  } else {
    d["a2_interval"] = py::none();
  }
  return d;
}

py::dict optimum_dict(const OptimumResult& r) {
  py::dict d;
  d["arrivals"] = r.profile.times;
  d["total"] = r.total;
  d["method"] = r.method;
  d["k"] = r.permutation.k;
  return d;
}

}  // namespace

PYBIND11_MODULE(_lsgame, m) {
  m.doc() = "Arrival game with linear slowdown";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<GameParams>(m, "GameParams")
      .def(py::init([](double beta, double alpha, double gamma, std::vector<double> d_star) {
             return GameParams::make(beta, alpha, gamma, std::move(d_star));
           }),
           py::arg("beta"), py::arg("alpha"), py::arg("gamma"), py::arg("d_star"))
      .def_readonly("n", &GameParams::n)
      .def_readonly("beta", &GameParams::beta)
      .def_readonly("alpha", &GameParams::alpha)
      .def_readonly("gamma", &GameParams::gamma)
      .def_readonly("d_star", &GameParams::d_star)
      .def("shifted", &GameParams::shifted);

  m.def("solve_departures", [](const GameParams& p, std::vector<double> a) {
    return solve_departures(p, ArrivalProfile{std::move(a)}).times;
  });
  m.def("verify_dynamics", [](const GameParams& p, std::vector<double> a, std::vector<double> d) {
    return verify_dynamics(p, ArrivalProfile{std::move(a)}, DepartureProfile{std::move(d)});
  });
  m.def("permutation_of", [](const GameParams& p, std::vector<double> a) {
    const ArrivalProfile arr{std::move(a)};
    return permutation_of(p, arr, solve_departures(p, arr)).k;
  });
  m.def("enumerate_permutations", [](int n, int cap) {
    std::vector<std::vector<int>> out;
    for (const auto& pv : enumerate_permutations(n, cap)) out.push_back(pv.k);
    return out;
  }, py::arg("n"), py::arg("cap") = 10);
  m.def("catalan", &catalan);

  m.def("user_costs", [](const GameParams& p, std::vector<double> a) {
    return user_costs(p, a);
  });
  m.def("best_response", [](const GameParams& p, std::vector<double> a, int user) {
    const auto r = best_response(p, ArrivalProfile{std::move(a)}, static_cast<std::size_t>(user));
    return py::make_tuple(r.minimizers, r.min_cost);
  }, py::arg("params"), py::arg("arrivals"), py::arg("user"),
     "Minimizers and minimum cost of user (0-based) over [a_{user-1}, inf).");

  m.def("br1", &two_user::br1);
  m.def("br2", &two_user::br2);
  m.def("spne", [](const GameParams& p) { return set_dict(two_user::spne(p)); });
  m.def("cne", [](const GameParams& p) { return set_dict(two_user::cne(p)); });

  m.def("br_run", [](const GameParams& p, std::vector<double> a, int max_iterations) {
    BRConfig c;
    c.max_iterations = max_iterations;
    const auto o = br_run(p, ArrivalProfile{std::move(a)}, c);
    py::dict d;
    d["arrivals"] = o.profile.times;
    d["costs"] = o.costs;
    d["iterations"] = o.iterations;
    d["converged"] = o.converged;
    return d;
  }, py::arg("params"), py::arg("arrivals"), py::arg("max_iterations") = 100);

  m.def("exhaustive_optimum", [](const GameParams& p) {
    return optimum_dict(exhaustive_optimum(p));
  });
  m.def("heuristic_optimum", [](const GameParams& p, int restarts, std::uint64_t seed) {
    return optimum_dict(heuristic_optimum(p, restarts, seed));
  }, py::arg("params"), py::arg("restarts") = 4, py::arg("seed") = 0);

  m.def("quantile_targets", &quantile_targets);
  m.def("run_experiment_json", [](const std::string& config) {
    const auto cfg = ExperimentConfig::from_json(nlohmann::json::parse(config));
    return run_experiment(cfg).summary.dump();
  }, "Runs an experiment from a JSON config string; returns the summary as JSON.");
}
