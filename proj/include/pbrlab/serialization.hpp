#pragma once

// JSON encodings shared by the CLI reports and the Python bindings. Doubles
// are written in shortest round-trip form, so decode(encode(x)) == x.
//
//   state        {"label": s, "amplitudes": [[re, im], ...]}
//   basis        {"label": s, "vectors": [state, ...]}
//   model        {"space": [label, ...],
//                 "preparations": {label: [w, ...]},
//                 "measurements": {label: {"basis": basis, "response": [[xi, ...], ...]}}}
//   certificate  {"kind": s, "magnitude": x, "witness": {...}}

#include <map>
#include <string>

#include <json.hpp>

#include "pbrlab/certificate.hpp"
#include "pbrlab/errors.hpp"
#include "pbrlab/hilbert.hpp"
#include "pbrlab/ontology.hpp"
#include "pbrlab/simplex.hpp"

namespace pbrlab {

using Json = nlohmann::ordered_json;

/// Thrown by every decoder on malformed input.
class JsonFormatError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);

Json state_to_json(const QuantumState& state);
QuantumState state_from_json(const Json& j);

Json basis_to_json(const Basis& basis);
Basis basis_from_json(const Json& j);

Json weights_to_json(const EpistemicState& mu);
Json response_to_json(const ResponseFunction& xi);

Json model_to_json(const OntologicalModel& model);
OntologicalModel model_from_json(const Json& j);

/// {label: state}; each state's own label is replaced by its key.
Json state_table_to_json(const std::map<std::string, QuantumState>& states);
std::map<std::string, QuantumState> state_table_from_json(const Json& j);

Json certificate_to_json(const ContradictionCertificate& cert);
ContradictionCertificate certificate_from_json(const Json& j);

Json born_report_to_json(const BornReport& report);

/// {"vars": n, "rows": m, "standardized_rows": r}
Json lp_summary_to_json(const LinearProgram& lp);

}  // namespace pbrlab
