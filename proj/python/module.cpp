#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "pbrlab/ontology.hpp"
#include "pbrlab/overlap_search.hpp"
#include "pbrlab/paradox.hpp"
#include "pbrlab/pbr.hpp"
#include "pbrlab/scenario.hpp"
#include "pbrlab/serialization.hpp"

namespace py = pybind11;
using namespace pbrlab;

namespace {

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_python(const py::object& o) {
    return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

QuantumState state(const std::vector<Complex>& amplitudes) { return QuantumState::normalized(amplitudes); }

py::object certificate(const std::optional<ContradictionCertificate>& c) {
    return c ? to_python(certificate_to_json(*c)) : py::none();
}

}  // namespace

PYBIND11_MODULE(_pbrlab, m) {
    m.doc() = "Finite ontological models and the PBR forbidden-outcome argument";

    py::register_exception<Error>(m, "Error", PyExc_ValueError);

    m.def("version", &version);

    m.def("forbidden_table", [] { return forbidden_table(pbr_scenario()); },
          "4x4 Born table |<phi_k|P_i>|^2; rows 00, 0+, +0, ++");

    m.def(
        "pbr_feasibility",
        [](double q, std::size_t grid, bool full_born) {
            const auto r = pbr_feasibility(q, grid, {.full_born = full_born});
            py::dict d;
            d["q"] = r.q;
            d["grid"] = r.grid;
            d["block_size"] = r.block_size;
            d["feasible"] = r.feasible();
            d["min_violation"] = r.min_violation;
            d["forbidden_probability"] = r.forbidden_probability;
            d["certificate"] = certificate(r.certificate);
            return d;
        },
        py::arg("q"), py::arg("grid") = 8, py::arg("full_born") = false);

    m.def(
        "leakage_probability",
        [](double q, const std::vector<Complex>& psi1, const std::vector<Complex>& psi2,
           const std::vector<Complex>& psi1_perp) {
            return leakage_probability(q, state(psi1), state(psi2), state(psi1_perp)).probability;
        },
        py::arg("q"), py::arg("psi1"), py::arg("psi2"), py::arg("psi1_perp"));

    m.def(
        "classical_overlap",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            auto space = OnticSpace::indexed(a.size());
            return classical_overlap(EpistemicState(space, a), EpistemicState(space, b));
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "pbr_overlap_bound",
        [](std::size_t grid, const std::string& constraints, std::size_t restarts, std::uint64_t seed) {
            const auto r = pbr_overlap_bound(grid, pbr_constraint_set_from_string(constraints), restarts, seed);
            py::dict d;
            d["best_q"] = r.best_q;
            d["feasible"] = r.feasible;
            d["iterations"] = r.iterations;
            d["converged"] = r.converged;
            return d;
        },
        py::arg("grid") = 8, py::arg("constraints") = "entangled", py::arg("restarts") = 4, py::arg("seed") = 1);

    m.def(
        "fermion_check",
        [](std::size_t grid, double separation, double sigma) {
            const auto r = fermion_distribution_check({.grid = grid, .separation = separation, .sigma = sigma});
            py::dict d;
            d["symmetric_diagonal_mass"] = r.symmetric_diagonal_mass;
            d["antisymmetric_max_diagonal"] = r.antisymmetric_max_diagonal;
            d["exchange_exact"] = r.exchange_exact;
            d["certificate"] = certificate(r.certificate);
            return d;
        },
        py::arg("grid") = 64, py::arg("separation") = 1.0, py::arg("sigma") = 0.5);

    m.def(
        "run_scenario",
        [](const py::object& scenario) {
            const auto s = parse_scenario(from_python(scenario));
            return to_python(report_to_json(run_scenario(s)));
        },
        py::arg("scenario"), "Runs a scenario given as a dict and returns the JSON report as a dict");

    m.def(
        "run_suite", [](const std::string& directory) { return to_python(suite_to_json(run_suite(directory))); },
        py::arg("directory"));
}
