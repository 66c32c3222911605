#include "pbrlab/serialization.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace pbrlab {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) throw JsonFormatError(std::string("expected an object holding '") + key + "'");
    const auto it = j.find(key);
    if (it == j.end()) throw JsonFormatError(std::string("missing field '") + key + "'");
    return *it;
}

double number(const Json& j, const char* what) {
    if (!j.is_number()) throw JsonFormatError(std::string(what) + ": expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw JsonFormatError(std::string(what) + ": non-finite number");
    return x;
}

std::string text(const Json& j, const char* what) {
    if (!j.is_string()) throw JsonFormatError(std::string(what) + ": expected a string");
    return j.get<std::string>();
}

std::vector<double> number_array(const Json& j, const char* what) {
    if (!j.is_array()) throw JsonFormatError(std::string(what) + ": expected an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& x : j) out.push_back(number(x, what));
    return out;
}

}  // namespace

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    if (j.is_number()) return {number(j, "amplitude"), 0.0};
    if (!j.is_array() || j.size() != 2) throw JsonFormatError("amplitude: expected [re, im]");
    return {number(j[0], "amplitude"), number(j[1], "amplitude")};
}

Json state_to_json(const QuantumState& state) {
    Json amps = Json::array();
    for (const auto& a : state.amplitudes()) amps.push_back(complex_to_json(a));
    return Json{{"label", state.label()}, {"amplitudes", std::move(amps)}};
}

QuantumState state_from_json(const Json& j) {
    const auto& amps = field(j, "amplitudes");
    if (!amps.is_array() || amps.empty()) throw JsonFormatError("amplitudes: expected a non-empty array");
    std::vector<Complex> v;
    v.reserve(amps.size());
    for (const auto& a : amps) v.push_back(complex_from_json(a));
    std::string label;
    if (j.contains("label")) label = text(j["label"], "label");
    return QuantumState(std::move(v), std::move(label));
}

Json basis_to_json(const Basis& basis) {
    Json vectors = Json::array();
    for (const auto& v : basis.vectors()) vectors.push_back(state_to_json(v));
    return Json{{"label", basis.label()}, {"vectors", std::move(vectors)}};
}

Basis basis_from_json(const Json& j) {
    const auto& vs = field(j, "vectors");
    if (!vs.is_array()) throw JsonFormatError("vectors: expected an array");
    std::vector<QuantumState> vectors;
    for (const auto& v : vs) vectors.push_back(state_from_json(v));
    std::string label;
    if (j.contains("label")) label = text(j["label"], "label");
    return Basis(std::move(vectors), std::move(label));
}

Json weights_to_json(const EpistemicState& mu) {
    Json out = Json::array();
    for (double w : mu.weights()) out.push_back(w);
    return out;
}

Json response_to_json(const ResponseFunction& xi) {
    Json rows = Json::array();
    for (std::size_t l = 0; l < xi.size(); ++l) {
        Json row = Json::array();
        for (double p : xi.row(l)) row.push_back(p);
        rows.push_back(std::move(row));
    }
    return rows;
}

Json model_to_json(const OntologicalModel& model) {
    Json space = Json::array();
    for (const auto& l : model.space()->labels()) space.push_back(l);
    Json preps = Json::object();
    for (const auto& [label, mu] : model.preparations()) preps[label] = weights_to_json(mu);
    Json meas = Json::object();
    for (const auto& [label, m] : model.measurements()) {
        meas[label] = Json{{"basis", basis_to_json(m.basis)}, {"response", response_to_json(m.response)}};
    }
    return Json{{"space", std::move(space)}, {"preparations", std::move(preps)}, {"measurements", std::move(meas)}};
}

OntologicalModel model_from_json(const Json& j) {
    const auto& sp = field(j, "space");
    if (!sp.is_array()) throw JsonFormatError("space: expected an array of labels");
    std::vector<std::string> labels;
    for (const auto& l : sp) labels.push_back(text(l, "space label"));
    auto space = std::make_shared<const OnticSpace>(std::move(labels));

    std::map<std::string, EpistemicState> preps;
    const auto& pj = field(j, "preparations");
    if (!pj.is_object()) throw JsonFormatError("preparations: expected an object");
    for (const auto& [label, w] : pj.items()) preps.emplace(label, EpistemicState(space, number_array(w, "weights")));

    std::map<std::string, Measurement> meas;
    const auto& mj = field(j, "measurements");
    if (!mj.is_object()) throw JsonFormatError("measurements: expected an object");
    for (const auto& [label, m] : mj.items()) {
        Basis basis = basis_from_json(field(m, "basis"));
        const auto& rows = field(m, "response");
        if (!rows.is_array() || rows.size() != space->size()) {
            throw JsonFormatError("response of '" + label + "': expected one row per ontic state");
        }
        std::vector<double> table;
        for (const auto& row : rows) {
            const auto r = number_array(row, "response row");
            if (r.size() != basis.dim()) {
                throw JsonFormatError("response of '" + label + "': row length differs from basis dimension");
            }
            table.insert(table.end(), r.begin(), r.end());
        }
        const std::size_t k = basis.dim();
        meas.emplace(label, Measurement{std::move(basis), ResponseFunction(space, k, std::move(table))});
    }
    return OntologicalModel(space, std::move(preps), std::move(meas));
}

Json state_table_to_json(const std::map<std::string, QuantumState>& states) {
    Json out = Json::object();
    for (const auto& [label, s] : states) out[label] = state_to_json(s.with_label(label));
    return out;
}

std::map<std::string, QuantumState> state_table_from_json(const Json& j) {
    if (!j.is_object()) throw JsonFormatError("state table: expected an object");
    std::map<std::string, QuantumState> out;
    for (const auto& [label, s] : j.items()) out.emplace(label, state_from_json(s).with_label(label));
    return out;
}

Json certificate_to_json(const ContradictionCertificate& cert) {
    return Json{{"kind", to_string(cert.kind)}, {"magnitude", cert.magnitude}, {"witness", cert.witness}};
}

ContradictionCertificate certificate_from_json(const Json& j) {
    const auto kind = certificate_kind_from_string(text(field(j, "kind"), "kind"));
    const double magnitude = number(field(j, "magnitude"), "magnitude");
    Json witness = j.contains("witness") ? j["witness"] : Json::object();
    if (!std::isfinite(magnitude) || !(magnitude > 0.0)) throw JsonFormatError("magnitude: must be positive");
    return make_certificate(kind, magnitude, std::move(witness));
}

Json born_report_to_json(const BornReport& report) {
    Json out{{"max_deviation", report.max_deviation}, {"tolerance", report.tolerance}, {"passed", report.passed}};
    if (report.worst_case) {
        out["worst_case"] = Json{{"preparation", report.worst_case->preparation},
                                 {"measurement", report.worst_case->measurement},
                                 {"outcome", report.worst_case->outcome}};
    } else {
        out["worst_case"] = nullptr;
    }
    Json clashes = Json::array();
    for (const auto& c : report.support_clashes) {
        clashes.push_back(Json{{"first", c.first}, {"second", c.second}, {"measurement", c.measurement},
                               {"shared", c.shared}});
    }
    out["support_clashes"] = std::move(clashes);
    return out;
}

Json lp_summary_to_json(const LinearProgram& lp) {
    return Json{{"vars", lp.num_vars()}, {"rows", lp.constraints.size()},
                {"standardized_rows", standardized_row_count(lp)}};
}

}  // namespace pbrlab
