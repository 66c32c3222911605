#pragma once

#include <string>

#include <json.hpp>

namespace pbrlab {

enum class CertificateKind { kLpInfeasible, kProbabilityViolation, kSupportClash };

const char* to_string(CertificateKind kind);
/// Throws InvalidArgument on an unknown name.
CertificateKind certificate_kind_from_string(const std::string& name);

/// Machine-checkable record of a contradiction. `magnitude` is always a
/// probability mass and is strictly positive; `witness` names the violated
/// constraints.
struct ContradictionCertificate {
    CertificateKind kind = CertificateKind::kLpInfeasible;
    double magnitude = 0.0;
    nlohmann::ordered_json witness;
};

/// Throws InvariantViolation unless magnitude > 0 and finite.
ContradictionCertificate make_certificate(CertificateKind kind, double magnitude, nlohmann::ordered_json witness);

}  // namespace pbrlab
