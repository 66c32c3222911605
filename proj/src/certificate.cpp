#include "pbrlab/certificate.hpp"

#include <cmath>
#include <utility>

#include "pbrlab/errors.hpp"

namespace pbrlab {

const char* to_string(CertificateKind kind) {
    switch (kind) {
        case CertificateKind::kLpInfeasible: return "LP_INFEASIBLE";
        case CertificateKind::kProbabilityViolation: return "PROBABILITY_VIOLATION";
        case CertificateKind::kSupportClash: return "SUPPORT_CLASH";
    }
    return "?";
}

CertificateKind certificate_kind_from_string(const std::string& name) {
    for (auto k : {CertificateKind::kLpInfeasible, CertificateKind::kProbabilityViolation,
                   CertificateKind::kSupportClash}) {
        if (name == to_string(k)) return k;
    }
    throw InvalidArgument("unknown certificate kind '" + name + "'");
}

ContradictionCertificate make_certificate(CertificateKind kind, double magnitude, nlohmann::ordered_json witness) {
    if (!std::isfinite(magnitude) || !(magnitude > 0.0)) {
        throw InvariantViolation(std::string(to_string(kind)) + " certificate with non-positive magnitude");
    }
    return ContradictionCertificate{kind, magnitude, std::move(witness)};
}

}  // namespace pbrlab
