#pragma once

// Largest classical overlap between the epistemic states of two quantum
// states, subject to reproducing their Born statistics for a chosen set of
// measurements. With the responses fixed the problem is an LP; jointly over
// distributions and responses it is bilinear and is searched by alternation.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pbrlab/hilbert.hpp"
#include "pbrlab/ontology.hpp"
#include "pbrlab/simplex.hpp"
#include "pbrlab/tolerances.hpp"

namespace pbrlab {

struct OverlapSearchOptions {
    /// Half-width of the band around each non-zero Born target.
    double born_band = tol::kBornBand;
    /// Tolerance of the born_reproduction_check run on every returned model.
    double check_tolerance = 1e-7;
    std::size_t max_iterations = 100;
    /// Alternation stops once an iteration gains less than this.
    double min_improvement = 1e-9;
    /// Smallest step tried when moving both distributions toward one point.
    double min_step = 1e-6;
    std::size_t bisection_steps = 40;
};

struct OverlapSearchResult {
    /// classical_overlap(first, second); 0 when infeasible.
    double best_q = 0.0;
    bool feasible = false;
    std::string first_label;
    std::string second_label;
    std::optional<EpistemicState> first;
    std::optional<EpistemicState> second;
    /// Carries the two preparations (or, for the PBR bound, the four product
    /// preparations) and every constrained measurement.
    std::optional<OntologicalModel> model;
    std::optional<BornReport> born;
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t restarts = 0;
    /// True for the alternating search: best_q is attained by the returned
    /// model but is not certified to be the global maximum.
    bool lower_bound = false;
};

/// Solves
///     maximize sum_l m(l)
///     s.t. m <= mu1, m <= mu2, sum mu_i = 1, mu_i >= 0,
///          sum_l mu_i(l) xi_j(k|l) = |<b_jk|psi_i>|^2   for every j, k
/// with each measurement's response held fixed. Born targets at or below
/// tol::kStructuralZero are imposed exactly; others within +-born_band.
/// `grid` sizes the ontic space when `measurements` is empty and must match
/// their space otherwise. An infeasible LP is reported, not thrown.
OverlapSearchResult max_overlap_fixed_response(const QuantumState& psi1, const QuantumState& psi2,
                                               std::span<const Measurement> measurements, std::size_t grid,
                                               const OverlapSearchOptions& options = {});

/// Alternates an LP over the distributions (responses fixed) with a step on
/// the responses: for some point u, the largest t for which
/// ((1-t) mu1 + t delta_u, (1-t) mu2 + t delta_u) admits responses
/// reproducing the Born statistics, found by bisection on a response LP.
/// Each accepted step raises the overlap to at least (1-t) q + t.
/// Restart r starts from point masses on two points carrying psi1 and psi2
/// and Born responses of random states elsewhere (seeded by seed and r).
OverlapSearchResult max_overlap_alternating(const QuantumState& psi1, const QuantumState& psi2,
                                            std::span<const Basis> measurements, std::size_t grid,
                                            std::size_t restarts, std::uint64_t seed,
                                            const OverlapSearchOptions& options = {});

enum class PbrConstraintSet {
    /// Four product preparations measured in the entangled basis, with
    /// product-form distributions on the pair space.
    kEntangled,
    kNone,
    /// |0> and |+> measured in the Z basis only.
    kSingleSystemZ,
};

const char* to_string(PbrConstraintSet set);
PbrConstraintSet pbr_constraint_set_from_string(const std::string& name);

/// Overlap of mu_0 and mu_+ on `grid` single-system points. In the entangled
/// mode the response step moves both distributions toward a common point
/// and re-solves the responses on the pair space, where all four product
/// preparations must keep their Born statistics.
OverlapSearchResult pbr_overlap_bound(std::size_t grid, PbrConstraintSet set, std::size_t restarts = 4,
                                      std::uint64_t seed = 1, const OverlapSearchOptions& options = {});

/// Responses xi(k|l) = |<b_k|states[l]>|^2 on the space l0, l1, ..., one
/// Measurement per basis.
std::vector<Measurement> psi_complete_responses(std::span<const QuantumState> states, std::span<const Basis> bases);

/// cos(theta/2)|0> + sin(theta/2)|1> at theta = 2 pi (l + offset) / n, labelled "g<l>".
std::vector<QuantumState> great_circle_states(std::size_t n, double offset = 0.0);

/// sum_k min(p1_k, p2_k), minimized over the measurements: an upper bound on
/// the overlap of any model reproducing those statistics (1 if none).
double overlap_upper_bound(const QuantumState& psi1, const QuantumState& psi2, std::span<const Basis> measurements);

}  // namespace pbrlab
