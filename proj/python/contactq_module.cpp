#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "contactq/characteristics.hpp"
#include "contactq/contact.hpp"
#include "contactq/errors.hpp"
#include "contactq/io.hpp"
#include "contactq/parser.hpp"
#include "contactq/quantize.hpp"
#include "contactq/sphere.hpp"
#include "contactq/thermo.hpp"

namespace py = pybind11;
using namespace contactq;

namespace {

std::vector<std::vector<double>> flow_rows(const std::string& f, const std::vector<double>& start, double t,
                                           double step, int n) {
  ContactChart chart(n);
  if (start.size() != static_cast<std::size_t>(2 * n + 1)) throw py::value_error("start needs u, q.., p..");
  ContactPoint x0{start[0], {start.begin() + 1, start.begin() + 1 + n}, {start.begin() + 1 + n, start.end()}};
  Trajectory tr = flow(NumericHamiltonian::from_symbol(chart.parse(f), chart), x0, t, step);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    std::vector<double> r{tr.times[k], tr.states[k].u};
    r.insert(r.end(), tr.states[k].q.begin(), tr.states[k].q.end());
    r.insert(r.end(), tr.states[k].p.begin(), tr.states[k].p.end());
    r.push_back(tr.residuals[k]);
    rows.push_back(std::move(r));
  }
  return rows;
}

HarmonicExpansion harmonic(const AmbientStructure& s, const std::string& expr) {
  return HarmonicExpansion::reduce(parse_expr(expr, s.registry()));
}

}  // namespace

PYBIND11_MODULE(contactq, m) {
  m.doc() = "Contact geometry, thermodynamic Legendre maps and their quantization";

  // Translators run newest first, so the more specific type goes last.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  m.def(
      "bracket",
      [](const std::string& f, const std::string& g, int n) {
        ContactChart chart(n);
        return to_string(lagrange_bracket(chart.parse(f), chart.parse(g), chart));
      },
      py::arg("f"), py::arg("g"), py::arg("n") = 1, "Lagrange bracket (F, G) as canonical text.");

  m.def(
      "bracket_json",
      [](const std::string& f, const std::string& g, int n) {
        ContactChart chart(n);
        return symbol_to_json(lagrange_bracket(chart.parse(f), chart.parse(g), chart)).dump();
      },
      py::arg("f"), py::arg("g"), py::arg("n") = 1);

  m.def(
      "star",
      [](const std::string& f, const std::string& g, int n) {
        QuantumChart qc(n);
        return to_string(restricted_star(qc.parse(f), qc.parse(g), qc));
      },
      py::arg("f"), py::arg("g"), py::arg("n") = 1, "Restricted star product F * G at w = 1.");

  m.def(
      "lifted_star",
      [](const std::string& f, const std::string& g, int n) {
        QuantumChart qc(n);
        return to_string(moyal(lift(qc.parse(f), qc), lift(qc.parse(g), qc), qc));
      },
      py::arg("f"), py::arg("g"), py::arg("n") = 1);

  m.def("flow", &flow_rows, py::arg("f"), py::arg("start"), py::arg("t"), py::arg("step") = 1e-3, py::arg("n") = 1,
        "Contact flow samples as rows (t, u, q.., p.., |F|).");

  m.def(
      "ideal_gas",
      [](double nR, double U, double V) {
        ThermoState s = ideal_gas(nR, U, V);
        return py::dict(py::arg("U") = s.U, py::arg("V") = s.V, py::arg("S") = s.S, py::arg("T") = s.T,
                        py::arg("P") = s.P);
      },
      py::arg("nR"), py::arg("U"), py::arg("V"));

  m.def(
      "first_law_residual",
      [](double nR, const std::string& grid) {
        return first_law_residual(legendre_submanifold(FundamentalRelation::ideal_gas(nR), parse_grid(grid)));
      },
      py::arg("nR"), py::arg("grid"));

  m.def(
      "reduced_eigenvalues",
      [](const std::string& f, double a, double b, int points, int count, double hbar) {
        QuantumChart qc(1);
        return grid_eigensolve(schrodinger_reduce(qc.parse(f), qc), a, b, points, count, {{"hbar", hbar}});
      },
      py::arg("f"), py::arg("a"), py::arg("b"), py::arg("points"), py::arg("count"), py::arg("hbar") = 1.0,
      "Lowest eigenvalues of the Schrodinger reduction of F on [a, b].");

  m.def(
      "sphere_operator",
      [](const std::string& structure_json, const std::string& f, int cutoff) {
        AmbientStructure s = structure_from_json(nlohmann::json::parse(structure_json));
        return fock_to_json(sphere_operator(harmonic(s, f), s, cutoff)).dump();
      },
      py::arg("structure"), py::arg("f"), py::arg("cutoff"), "Coordinate-list JSON of the quantized sphere function.");

  m.def(
      "commutator_defect",
      [](const std::string& structure_json, const std::string& f, const std::string& g, int cutoff) {
        AmbientStructure s = structure_from_json(nlohmann::json::parse(structure_json));
        return commutator_report(harmonic(s, f), harmonic(s, g), s, cutoff).interior_defect;
      },
      py::arg("structure"), py::arg("f"), py::arg("g"), py::arg("cutoff"));
}
