#pragma once

// The PBR protocol for the |0>/|+> pair: four independently prepared product
// states, a joint measurement in an entangled basis in which each preparation
// has one outcome of Born probability zero, and the contradiction that appears
// once the single-system distributions overlap.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "pbrlab/certificate.hpp"
#include "pbrlab/hilbert.hpp"
#include "pbrlab/ontology.hpp"
#include "pbrlab/simplex.hpp"

namespace pbrlab {

/// Preparation labels in table order.
inline constexpr std::array<const char*, 4> kPbrPreparations = {"00", "0+", "+0", "++"};
inline constexpr const char* kPbrMeasurement = "pbr";

struct PbrScenario {
    std::array<QuantumState, 4> product_states;
    Basis entangled_basis;
    /// (preparation index, outcome index) pairs of Born probability zero.
    std::array<std::pair<std::size_t, std::size_t>, 4> forbidden;
};

/// |00>, |0+>, |+0>, |++>.
std::array<QuantumState, 4> pbr_product_states();

/// phi1 = (|01> + |10>)/sqrt2     phi2 = (|0-> + |1+>)/sqrt2
/// phi3 = (|+1> + |-0>)/sqrt2     phi4 = (|+-> + |-+>)/sqrt2
Basis pbr_entangled_basis();

/// Throws InvariantViolation if a forbidden pair is not orthogonal.
PbrScenario pbr_scenario();

using ForbiddenTable = std::array<std::array<double, 4>, 4>;

/// Entry (i, k) = |<phi_k|P_i>|^2.
ForbiddenTable forbidden_table(const PbrScenario& scenario);

/// Single-system distributions for |0> and |+> on L points with overlap q.
/// The overlap mass sits uniformly on a shared block of ceil(q L) points
/// (capped so that each state keeps one private point when q < 1); the rest
/// of each distribution is uniform on its own private block.
struct PbrOverlapPair {
    OnticSpacePtr space;
    EpistemicState zero;
    EpistemicState plus;
    std::size_t block_size = 0;
};

/// Throws InvalidArgument for q outside [0, 1] or a grid too small to hold
/// the three blocks.
PbrOverlapPair pbr_overlap_pair(double q, std::size_t grid);

struct PbrFeasibilityOptions {
    /// Also impose the twelve non-forbidden Born probabilities.
    bool full_born = false;
};

struct PbrFeasibilityResult {
    double q = 0.0;
    std::size_t grid = 0;
    std::size_t block_size = 0;
    bool full_born = false;
    OnticSpacePtr product_space;
    /// Strict LP: response table on the product space with the forbidden
    /// probabilities pinned to zero.
    LinearProgram lp;
    LpSolution solution;
    /// Optimum of the slack LP: least total L1 violation of the constraints.
    double min_violation = 0.0;
    /// Forbidden-outcome probability of each preparation at that optimum.
    std::array<double, 4> forbidden_probability{};
    /// Response table at the slack-LP optimum (always set).
    std::optional<ResponseFunction> least_violation_response;
    /// Present iff the strict LP is feasible.
    std::optional<ResponseFunction> response;
    /// Present iff the strict LP is infeasible.
    std::optional<ContradictionCertificate> certificate;

    bool feasible() const noexcept { return !certificate.has_value(); }
};

PbrFeasibilityResult pbr_feasibility(double q, std::size_t grid, const PbrFeasibilityOptions& options = {});

enum class PbrResponse {
    /// Equal weight on all four outcomes over the shared block, and a
    /// deterministic allowed outcome elsewhere.
    kUniformOnBlock,
    /// The response found by the slack LP.
    kLpOptimal,
};

/// Product-space model with preparations kPbrPreparations and measurement
/// kPbrMeasurement built from pbr_overlap_pair(q, grid).
OntologicalModel make_pbr_overlap_model(double q, std::size_t grid, PbrResponse response);

/// Reference model in which each product state is its own ontic state.
OntologicalModel make_pbr_psi_complete_model();

struct PbrProtocolEntry {
    std::string preparation;
    std::size_t forbidden_outcome = 0;
    double frequency = 0.0;
    double predicted = 0.0;
    /// Binomial standard deviation of the frequency at the predicted value.
    double sigma = 0.0;
};

struct PbrProtocolResult {
    std::array<PbrProtocolEntry, 4> entries;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    /// Largest predicted forbidden probability over the four preparations.
    double max_predicted = 0.0;
};

/// Samples each preparation `trials` times (preparation i uses seed + i) and
/// records how often its forbidden outcome fires. Throws UnknownLabel if the
/// model lacks a preparation or the measurement, and InvalidArgument if the
/// measurement does not have four outcomes.
PbrProtocolResult run_pbr_protocol(const OntologicalModel& model, std::uint64_t trials, std::uint64_t seed);

}  // namespace pbrlab
