#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "numrad/numrad.hpp"

namespace py = pybind11;
using namespace numrad;

namespace {

// Solvers hand back (converged, report JSON) so a capped run still yields its
// report; the Python layer turns that into a NonConvergence exception.
std::pair<bool, std::string> run(const std::function<SolveReport()>& solve) {
  py::gil_scoped_release release;
  try {
    const SolveReport rep = solve();
    return {rep.converged, to_json(rep)};
  } catch (const NonConvergence& e) {
    return {false, to_json(e.report())};
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "numerical radius solvers";

  m.def(
      "levelset",
      [](const ComplexMatrix& a, double tol) { return run([&] { return algorithm1(a, tol); }); },
      py::arg("a"), py::arg("tol") = 1e-14);
  m.def(
      "cutting",
      [](const ComplexMatrix& a, double tol, long max_cuts, bool optimal_cuts) {
        CuttingOptions o;
        o.tol = tol;
        o.max_cuts = max_cuts;
        o.optimal_cuts = optimal_cuts;
        return run([&] { return algorithm2(a, o); });
      },
      py::arg("a"), py::arg("tol") = 1e-14, py::arg("max_cuts") = -1, py::arg("optimal_cuts") = true);
  m.def(
      "hybrid",
      [](const ComplexMatrix& a, double tol, std::optional<std::string> cost_model) {
        HybridOptions o;
        o.tol = tol;
        if (cost_model) o.model = cost_model_from_json(*cost_model);
        return run([&] { return hybrid_solve(a, o); });
      },
      py::arg("a"), py::arg("tol") = 1e-14, py::arg("cost_model") = py::none());
  m.def("grid_oracle", &grid_oracle, py::arg("a"), py::arg("m") = 720, py::arg("refine_iters") = 60);
  m.def(
      "calibrate", [](long n, int samples) { return cost_model_to_json(calibrate(n, samples)); },
      py::arg("n"), py::arg("samples") = 3);

  m.def(
      "fiedler_curvature",
      [](const ComplexMatrix& a, double theta) { return fiedler_curvature(a, theta).radius; },
      py::arg("a"), py::arg("theta"));
  m.def("rho_derivatives", [](const ComplexMatrix& a, double theta) {
    const RhoEval ev = rho_H(a, theta);
    return py::make_tuple(ev.value, rho_first_derivative(a, ev), rho_second_derivative(a, ev));
  });

  m.def("uhlig_angle_rate", &uhlig_angle_rate);
  m.def("uhlig_modulus_rate", &uhlig_modulus_rate);
  m.def("optimal_angle_rate", &optimal_angle_rate);
  m.def("simulate_uhlig_recursion", &simulate_uhlig_recursion, py::arg("mu"), py::arg("phi0"), py::arg("k"));
  m.def("simulate_optimal_recursion", &simulate_optimal_recursion, py::arg("s"), py::arg("r_tilde"),
        py::arg("phi0"), py::arg("k"));
  m.def("cuts_needed", &cuts_needed, py::arg("beta"), py::arg("mu"), py::arg("tau"));
  m.def("disk_min_planes", &disk_min_planes, py::arg("tau"));
  m.def("disk_refined_planes", &disk_refined_planes, py::arg("j"), py::arg("tau"));

  m.def(
      "gallery",
      [](const std::string& family, int n, std::map<std::string, double> params, std::uint64_t seed) {
        return make_gallery({family, n, std::move(params), seed});
      },
      py::arg("family"), py::arg("n") = 0, py::arg("params") = std::map<std::string, double>{},
      py::arg("seed") = 0);
  m.def("gallery_families", &gallery_families);
  m.def("read_matrix_market", py::overload_cast<const std::string&>(&read_matrix_market), py::arg("path"));
  m.def("write_matrix_market",
        py::overload_cast<const ComplexMatrix&, const std::string&>(&write_matrix_market), py::arg("a"),
        py::arg("path"));
}
