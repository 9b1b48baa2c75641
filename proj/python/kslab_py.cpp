#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kslab/bifurcation.hpp"
#include "kslab/config.hpp"
#include "kslab/equilibria.hpp"
#include "kslab/errors.hpp"
#include "kslab/shooting.hpp"
#include "kslab/singular.hpp"
#include "kslab/spectrum.hpp"

namespace py = pybind11;
using namespace kslab;

PYBIND11_MODULE(_kslab, m) {
  m.doc() = "Radial solutions of -u'' - (N-1)/r u' + u = lambda e^u";
  py::register_exception<Error>(m, "KslabError", PyExc_RuntimeError);

  m.def("solve_equilibria", [](double lambda) {
    const auto e = solve_equilibria(lambda);
    return py::make_tuple(e.u_lower, e.u_upper);
  }, py::arg("lambda_"), "(u_lower, u_upper) with lambda e^u = u.");
  m.def("lambda_star", &lambda_star, py::arg("dimension"));
  m.def("mu_from_lambda", [](double lambda) { return mu_lambda_bridge(lambda, BridgeDirection::lambda_to_mu); });
  m.def("lambda_from_mu", [](double mu) { return mu_lambda_bridge(mu, BridgeDirection::mu_to_lambda); });

  m.def("singular_profile", [](int dimension, double lambda, double r_max) {
    const auto p = singular_profile(dimension, lambda, r_max);
    py::dict out;
    std::vector<double> r, u, du;
    for (const auto& n : p.nodes()) {
      r.push_back(n.r);
      u.push_back(n.u);
      du.push_back(n.u_prime);
    }
    out["r"] = r;
    out["u"] = u;
    out["u_prime"] = du;
    out["r0"] = p.r0();
    out["contraction_ratio"] = p.source().contraction_ratio;
    return out;
  }, py::arg("dimension"), py::arg("lambda_"), py::arg("r_max"));

  m.def("critical_radius", [](int dimension, std::size_t i, double lambda) {
    return R_of_lambda(dimension, i, lambda);
  }, py::arg("dimension"), py::arg("i"), py::arg("lambda_"), "i-th critical radius of the singular solution.");

  m.def("regular_critical_radii", [](int dimension, double lambda, double gamma, double r_max) {
    return shoot_regular(ProblemParams::make(dimension, lambda), gamma, r_max).critical_radii(r_max);
  }, py::arg("dimension"), py::arg("lambda_"), py::arg("gamma"), py::arg("r_max"));

  m.def("neumann_radial_eigs", &neumann_radial_eigs, py::arg("dimension"), py::arg("radius"), py::arg("k"));

  m.def("find_lambda_i", [](int dimension, double radius, std::size_t i) {
    const auto t = find_lambda_i(dimension, radius, i);
    py::dict out;
    out["lambda_i"] = t.lambda_i;
    out["bracket"] = py::make_tuple(t.bracket_lo, t.bracket_hi);
    out["residual"] = t.residual;
    return out;
  }, py::arg("dimension"), py::arg("radius"), py::arg("i"));
  m.def("i_star", [](int dimension, double radius) {
    return i_star(dimension, radius, 0.5 * lambda_star(dimension));
  }, py::arg("dimension"), py::arg("radius"));

  m.def("branch_trace", [](int dimension, double radius, std::size_t i, double lambda_i, std::vector<double> gammas) {
    const auto tr = branch_trace(dimension, radius, i, lambda_i, gammas);
    std::vector<py::tuple> samples;
    for (const auto& s : tr.samples) samples.push_back(py::make_tuple(s.gamma, s.lambda, s.residual));
    py::dict out;
    out["samples"] = samples;
    out["unsolved"] = tr.unsolved;
    out["sign_changes"] = tr.sign_changes;
    return out;
  }, py::arg("dimension"), py::arg("radius"), py::arg("i"), py::arg("lambda_i"), py::arg("gammas"));

  m.def("morse_counts", [](int dimension, double lambda, double radius, std::vector<double> cutoffs) {
    const auto p = singular_profile(dimension, lambda, 2.0 * radius);
    std::vector<std::size_t> counts;
    for (const auto& rung : morse_ladder(p, radius, cutoffs)) counts.push_back(rung.negative_count);
    return counts;
  }, py::arg("dimension"), py::arg("lambda_"), py::arg("radius"), py::arg("cutoffs"));

  m.def("normalize_config", [](const std::string& text) { return serialize_config(parse_config(text)); },
        py::arg("text"), "Parses, validates and re-serializes a JSON run config.");
}
