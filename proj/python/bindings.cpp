// Python extension. Games cross the boundary as JSON text in the same shape the CLI reads;
// results come back as JSON text and are decoded on the Python side.

#include "minimaxlab/dynamics.hpp"
#include "minimaxlab/error.hpp"
#include "minimaxlab/io.hpp"
#include "minimaxlab/replicate.hpp"
#include "minimaxlab/stability.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace minimaxlab;

namespace {

QuadraticGame parse_game(const std::string& text) { return io::game_from_json(io::Json::parse(text)); }

AlgorithmSpec make_spec(const std::string& family, double alpha1, double alpha2, double beta, double k,
                        bool alternating) {
  AlgorithmSpec spec;
  spec.family = family_from_string(family);
  spec.alpha1 = alpha1;
  spec.alpha2 = alpha2;
  spec.beta = beta;
  spec.k = k;
  spec.mode = alternating ? UpdateMode::Alternating : UpdateMode::Simultaneous;
  spec.validate();
  return spec;
}

io::Json case_json(const CaseReport& r) {
  io::Json asserts = io::Json::array();
  for (const auto& a : r.assertions) asserts.push_back({{"name", a.name}, {"passed", a.passed}, {"observed", a.observed}});
  return {{"id", r.id}, {"description", r.description}, {"passed", r.passed}, {"assertions", asserts}};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "minimaxlab native core";

  py::register_exception<Error>(m, "MinimaxlabError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const nlohmann::json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def(
      "classify_json",
      [](const std::string& game, double tol) {
        return io::canonical_dump(io::to_json(quadratic::classify(parse_game(game), tol)), -1);
      },
      py::arg("game"), py::arg("tol") = quadratic::kDefaultTol);

  m.def(
      "stability_json",
      [](const std::string& game, const Vec& x, const Vec& y, const std::string& family, double alpha1,
         double alpha2, double beta, double k, bool alternating) {
        const QuadraticOracle f(parse_game(game));
        const AlgorithmSpec spec = make_spec(family, alpha1, alpha2, beta, k, alternating);
        return io::canonical_dump(io::to_json(stability::exponential_stability(spec, f, x, y)), -1);
      },
      py::arg("game"), py::arg("x"), py::arg("y"), py::arg("family"), py::arg("alpha1"), py::arg("alpha2"),
      py::arg("beta") = 0.0, py::arg("k") = 2.0, py::arg("alternating") = false);

  m.def(
      "simulate_json",
      [](const std::string& game, const Vec& z0, const std::string& family, double alpha1, double alpha2,
         double beta, double k, bool alternating, int max_iters, double stop_tol) {
        const QuadraticOracle f(parse_game(game));
        dynamics::SimulateOptions opts;
        opts.max_iters = max_iters;
        opts.stop_tol = stop_tol;
        const AlgorithmSpec spec = make_spec(family, alpha1, alpha2, beta, k, alternating);
        return io::canonical_dump(io::to_json(dynamics::simulate(spec, f, z0, opts)), -1);
      },
      py::arg("game"), py::arg("z0"), py::arg("family"), py::arg("alpha1"), py::arg("alpha2"),
      py::arg("beta") = 0.0, py::arg("k") = 2.0, py::arg("alternating") = false, py::arg("max_iters") = 10000,
      py::arg("stop_tol") = 1e-8);

  m.def("schur_stable", &stability::schur_real, py::arg("coeffs"),
        "All roots of the real polynomial (leading coefficient first) lie strictly inside the unit disc.");

  m.def(
      "region_predicate",
      [](const std::string& family, std::complex<double> lambda, double param, bool limit) {
        const PredicateResult r = stability::region_predicate({family_from_string(family), param, limit}, lambda);
        return py::make_tuple(r.stable, r.margin);
      },
      py::arg("family"), py::arg("lam"), py::arg("param") = 0.0, py::arg("limit") = false);

  m.def("replicate_ids", [] {
    std::vector<std::string> ids;
    for (const auto& c : replicate::cases()) ids.push_back(c.id);
    return ids;
  });

  m.def(
      "replicate_json", [](const std::string& id) { return case_json(replicate::run_case(id)).dump(); },
      py::arg("case_id"));
}
