#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "triality/cli.hpp"
#include "triality/convex_roof.hpp"
#include "triality/harness.hpp"
#include "triality/interferometer.hpp"
#include "triality/io.hpp"
#include "triality/measures.hpp"

namespace py = pybind11;
using namespace triality;

namespace {

SimplexFunction function_named(const std::string& name, bool normalized) {
  SimplexFunction f = builtin(name);
  return normalized ? normalize(f) : f;
}

DensityMatrix density(const Matrix& rho) { return validate_density(rho); }

DetectorConfig detectors(const std::vector<Vector>& states) {
  std::vector<PureState> pure;
  pure.reserve(states.size());
  for (const auto& v : states) pure.emplace_back(v);
  return DetectorConfig(std::move(pure));
}

RoofConfig roof_config(std::size_t m, std::size_t restarts, std::size_t iters, double tol, std::uint64_t seed) {
  return RoofConfig{.m = m, .restarts = restarts, .max_iters = iters, .tol = tol, .seed = seed};
}

// Reports cross the boundary as plain dicts, via their JSON form.
py::object to_python(const io::Json& j) {
  return py::module_::import("json").attr("loads")(io::dump(j));
}

}  // namespace

PYBIND11_MODULE(_triality, m) {
  m.doc() = "Wave, particle and mixedness measures on finite-dimensional states";

  py::register_exception<Error>(m, "TrialityError", PyExc_ValueError);

  m.def("builtin_names", &builtin_names);

  m.def("validate_density", [](const Matrix& rho) { return density(rho).matrix(); }, py::arg("rho"));
  m.def("random_density", [](std::size_t dim, std::size_t rank, std::uint64_t seed) {
    return random_density(dim, rank, seed).matrix();
  }, py::arg("dim"), py::arg("rank"), py::arg("seed"));
  m.def("random_pure", [](std::size_t dim, std::uint64_t seed) { return random_pure(dim, seed).amplitudes(); },
        py::arg("dim"), py::arg("seed"));
  m.def("special_state", [](const std::string& kind, std::size_t dim, std::optional<std::size_t> index) {
    return special_state(parse_special_kind(kind), dim, index).matrix();
  }, py::arg("kind"), py::arg("dim"), py::arg("index") = py::none());
  m.def("family_state", [](const std::string& kind, const Matrix& rho, double p) {
    return family_state(parse_family_kind(kind), density(rho), p).matrix();
  }, py::arg("kind"), py::arg("rho"), py::arg("p"));
  m.def("dephase", [](const Matrix& rho) { return dephase(density(rho)).matrix(); }, py::arg("rho"));

  m.def("simplex_value", [](const std::string& f, const std::vector<double>& x, bool normalized) {
    return function_named(f, normalized)(ProbVector(x));
  }, py::arg("f"), py::arg("x"), py::arg("normalized") = false);
  m.def("check_f_conditions", [](const std::string& f, std::size_t dim, std::size_t samples, std::uint64_t seed) {
    return to_python(io::to_json(check_f_conditions(builtin(f), dim, samples, seed)));
  }, py::arg("f"), py::arg("dim"), py::arg("samples"), py::arg("seed"));

  m.def("coherence_pure", [](const std::string& f, const Vector& psi, bool normalized) {
    return coherence_pure(function_named(f, normalized), PureState(psi));
  }, py::arg("f"), py::arg("psi"), py::arg("normalized") = false);
  m.def("path_information", [](const std::string& f, const Matrix& rho, bool normalized) {
    return path_information(function_named(f, normalized), density(rho));
  }, py::arg("f"), py::arg("rho"), py::arg("normalized") = false);
  m.def("coherence_direct", [](const std::string& name, const Matrix& rho) {
    return coherence_direct(name, density(rho));
  }, py::arg("name"), py::arg("rho"));
  m.def("quadratic_triality", [](const Matrix& rho) {
    const QuadraticTriality q = quadratic_triality(density(rho));
    return py::make_tuple(q.particle, q.wave, q.mixedness);
  }, py::arg("rho"));

  m.def("triality_report",
        [](const std::string& f, const Matrix& rho, const std::string& mode, bool normalized, std::size_t m,
           std::size_t restarts, std::size_t iters, double tol, std::uint64_t seed) {
          const TrialityReport r = triality_report(function_named(f, normalized), density(rho), parse_mode(mode),
                                                   roof_config(m, restarts, iters, tol, seed));
          return to_python(io::to_json(r));
        },
        py::arg("f"), py::arg("rho"), py::arg("mode") = "direct", py::arg("normalized") = false, py::arg("m") = 0,
        py::arg("restarts") = 16, py::arg("iters") = 2000, py::arg("tol") = 1e-8, py::arg("seed") = 0);

  m.def("roof_minimize",
        [](const std::string& f, const Matrix& rho, bool normalized, std::size_t m, std::size_t restarts,
           std::size_t iters, double tol, std::uint64_t seed) {
          const SimplexFunction fn = function_named(f, normalized);
          const RoofResult r = roof_minimize(fn, density(rho), roof_config(m, restarts, iters, tol, seed));
          return to_python(io::to_json(r, fn.name()));
        },
        py::arg("f"), py::arg("rho"), py::arg("normalized") = false, py::arg("m") = 0, py::arg("restarts") = 16,
        py::arg("iters") = 2000, py::arg("tol") = 1e-8, py::arg("seed") = 0);
  m.def("roof_sample_oracle",
        [](const std::string& f, const Matrix& rho, std::size_t samples, std::size_t m, std::uint64_t seed) {
          return roof_sample_oracle(builtin(f), density(rho), samples, m, seed);
        },
        py::arg("f"), py::arg("rho"), py::arg("samples"), py::arg("m") = 0, py::arg("seed") = 0);

  m.def("detector_gram", [](const std::vector<Vector>& d) { return detector_gram(detectors(d)); },
        py::arg("detectors"));
  m.def("reduce_system", [](const Matrix& rho, const std::vector<Vector>& d) {
    return reduce_system(density(rho), detectors(d)).matrix();
  }, py::arg("rho"), py::arg("detectors"));
  m.def("attach_detectors", [](const Matrix& rho, const std::vector<Vector>& d) {
    return attach_detectors(density(rho), detectors(d)).matrix();
  }, py::arg("rho"), py::arg("detectors"));
  m.def("detector_inequality_report", [](const Matrix& rho, const std::vector<Vector>& d) {
    return to_python(io::to_json(detector_inequality_report(density(rho), detectors(d))));
  }, py::arg("rho"), py::arg("detectors"));

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs one CLI subcommand; returns (exit_code, stdout, stderr).");
}
