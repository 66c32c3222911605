#pragma once

// Checkers for the distribution-mapping arguments against overlapping
// epistemic states: superposition closure, finite-overlap leakage, the
// double Stern-Gerlach phase flip and two-particle exchange symmetry. Each
// returns its intermediate quantities plus a ContradictionCertificate when
// the construction forces one.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pbrlab/certificate.hpp"
#include "pbrlab/hilbert.hpp"
#include "pbrlab/ontology.hpp"

namespace pbrlab {

/// How a superposition inherits the distributions of its components.
enum class SupportRule {
    /// mu = |alpha|^2 mu_1 + |beta|^2 mu_2 (Born weights, renormalized).
    kMixture,
    /// supp(mu) within supp(mu_1) union supp(mu_2); orthogonal states disjoint.
    kSubset,
};

const char* to_string(SupportRule rule);
/// Accepts "mixture" and "subset". Throws InvalidArgument otherwise.
SupportRule support_rule_from_string(const std::string& name);

struct DerivedState {
    std::array<Complex, 2> coeffs;
    QuantumState state;
};

/// An orthogonal base pair and superpositions of it.
class ClosureFamily {
public:
    /// Throws InvalidArgument if the base pair is not orthogonal, labels are
    /// missing or repeated, or a derived state differs from
    /// superpose(coeffs, base) beyond global phase.
    ClosureFamily(QuantumState first, QuantumState second, std::vector<DerivedState> derived);

    /// Base +z/-z with derived states +x, -x and, if `with_y`, +y, -y.
    static ClosureFamily mub(bool with_y = true);
    /// Derived states built from coefficient pairs; labels "d0", "d1", ...
    static ClosureFamily from_coefficients(QuantumState first, QuantumState second,
                                           const std::vector<std::array<Complex, 2>>& coeffs);

    const QuantumState& first() const noexcept { return first_; }
    const QuantumState& second() const noexcept { return second_; }
    const std::vector<DerivedState>& derived() const noexcept { return derived_; }
    /// Base pair first, then derived states.
    std::vector<QuantumState> all_states() const;

private:
    QuantumState first_;
    QuantumState second_;
    std::vector<DerivedState> derived_;
};

struct OrthogonalPairOverlap {
    std::string first;
    std::string second;
    double overlap = 0.0;
    std::vector<std::string> shared;
};

struct ClosureResult {
    SupportRule rule = SupportRule::kMixture;
    std::size_t grid = 0;
    /// Mixture: the induced distribution of every state.
    std::map<std::string, EpistemicState> distributions;
    /// Mixture: overlap of every orthogonal pair under those distributions.
    std::vector<OrthogonalPairOverlap> orthogonal_pairs;
    /// Subset, satisfiable: support of every state in a minimal assignment.
    std::map<std::string, std::vector<std::string>> supports;
    /// Subset: fewest ontic points any valid assignment needs.
    std::optional<std::size_t> min_points;
    /// Subset: number of distinct membership patterns searched.
    std::size_t patterns = 0;
    std::optional<ContradictionCertificate> certificate;

    bool satisfiable() const noexcept { return !certificate.has_value(); }
};

/// Throws InvalidArgument for grid < 2.
ClosureResult superposition_closure_check(const ClosureFamily& family, SupportRule rule, std::size_t grid);

struct LeakageResult {
    /// q |<psi1_perp|psi2>|^2 / 2
    double probability = 0.0;
    /// What quantum theory predicts for the same event.
    double quantum_value = 0.0;
    Complex amplitude;
    std::optional<ContradictionCertificate> certificate;
};

/// Probability that a device fed psi1 reports psi1_perp because the ontic
/// state fell in the overlap of mu_psi1 and mu_psi2. Throws InvalidArgument for
/// q outside [0, 1] or psi1_perp not orthogonal to psi1, and DimensionMismatch.
LeakageResult leakage_probability(double q, const QuantumState& psi1, const QuantumState& psi2,
                                  const QuantumState& psi1_perp);

struct SternGerlachResult {
    double phase = 0.0;
    QuantumState input;
    QuantumState output;
    /// |<-x|U|+x>|
    double overlap_with_minus_x = 0.0;
    bool output_is_minus_x = false;
    /// Overlap of the input and output distributions in the psi-complete
    /// model over the six MUB states.
    double support_overlap = 0.0;
    BornReport born;
    std::optional<ContradictionCertificate> certificate;
};

/// Applies exp(i phase) to the |-z> component of |+x>. A certificate is
/// emitted when the output is orthogonal to the input, in which case a
/// measurement-free phase shift would have to move the whole distribution
/// onto a disjoint support.
SternGerlachResult stern_gerlach_check(double phase = 3.141592653589793238462643383279502884);

struct FermionOptions {
    std::size_t grid = 64;
    double lo = -4.0;
    double hi = 4.0;
    /// Gaussian centres at -separation/2 and +separation/2.
    double separation = 1.0;
    double sigma = 0.5;
};

struct FermionResult {
    FermionOptions options;
    TwoParticleWavefunction symmetric;
    TwoParticleWavefunction antisymmetric;
    double symmetric_diagonal_mass = 0.0;
    double antisymmetric_max_diagonal = 0.0;
    bool exchange_exact = false;
    std::optional<ContradictionCertificate> certificate;
};

/// Throws InvalidArgument for grid < 8 or non-positive sigma, and
/// DegenerateAntisymmetrization when the two orbitals coincide.
FermionResult fermion_distribution_check(const FermionOptions& options = {});

/// exp(-(x - centre)^2 / (2 sigma^2)) sampled on the grid and grid-normalized.
std::vector<Complex> gaussian_orbital(const Grid& grid, double centre, double sigma);

}  // namespace pbrlab
