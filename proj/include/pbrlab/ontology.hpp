#pragma once

// Discrete ontological models: a finite ontic space, one probability
// distribution per prepared quantum state and one stochastic response table
// per projective measurement.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pbrlab/hilbert.hpp"

namespace pbrlab {

class OnticSpace {
public:
    explicit OnticSpace(std::vector<std::string> labels);

    /// Labels "l0", "l1", ...
    static std::shared_ptr<const OnticSpace> indexed(std::size_t size, const std::string& prefix = "l");
    /// Pair space; label of (a, b) is "(a,b)" and its index is ia * b.size() + ib.
    static std::shared_ptr<const OnticSpace> product(const OnticSpace& a, const OnticSpace& b);

    std::size_t size() const noexcept { return labels_.size(); }
    std::span<const std::string> labels() const noexcept { return labels_; }
    const std::string& operator[](std::size_t i) const { return labels_[i]; }
    std::optional<std::size_t> index_of(const std::string& label) const;

    friend bool operator==(const OnticSpace& a, const OnticSpace& b) { return a.labels_ == b.labels_; }

private:
    std::vector<std::string> labels_;
};

using OnticSpacePtr = std::shared_ptr<const OnticSpace>;

/// Probability distribution mu(lambda). Weights in [-kClamp, 0) are clamped to
/// zero; anything more negative, or a total off by more than kDistribution,
/// is rejected.
class EpistemicState {
public:
    EpistemicState(OnticSpacePtr space, std::vector<double> weights);

    static EpistemicState point_mass(OnticSpacePtr space, std::size_t index);
    static EpistemicState uniform(OnticSpacePtr space);

    const OnticSpacePtr& space() const noexcept { return space_; }
    std::size_t size() const noexcept { return weights_.size(); }
    std::span<const double> weights() const noexcept { return weights_; }
    double operator[](std::size_t i) const { return weights_[i]; }

private:
    OnticSpacePtr space_;
    std::vector<double> weights_;
};

/// xi(k | lambda), stored as an L x K row-stochastic table.
class ResponseFunction {
public:
    ResponseFunction(OnticSpacePtr space, std::size_t outcomes, std::vector<double> table);

    const OnticSpacePtr& space() const noexcept { return space_; }
    std::size_t outcomes() const noexcept { return outcomes_; }
    std::size_t size() const noexcept { return space_->size(); }
    double operator()(std::size_t lambda, std::size_t k) const { return table_[lambda * outcomes_ + k]; }
    std::span<const double> row(std::size_t lambda) const {
        return std::span<const double>(table_).subspan(lambda * outcomes_, outcomes_);
    }
    std::span<const double> table() const noexcept { return table_; }

private:
    OnticSpacePtr space_;
    std::size_t outcomes_;
    std::vector<double> table_;
};

struct Measurement {
    Basis basis;
    ResponseFunction response;
};

class OntologicalModel {
public:
    OntologicalModel(OnticSpacePtr space, std::map<std::string, EpistemicState> preparations,
                     std::map<std::string, Measurement> measurements);

    const OnticSpacePtr& space() const noexcept { return space_; }
    const std::map<std::string, EpistemicState>& preparations() const noexcept { return preparations_; }
    const std::map<std::string, Measurement>& measurements() const noexcept { return measurements_; }

    /// Throws UnknownLabel.
    const EpistemicState& preparation(const std::string& label) const;
    const Measurement& measurement(const std::string& label) const;

private:
    OnticSpacePtr space_;
    std::map<std::string, EpistemicState> preparations_;
    std::map<std::string, Measurement> measurements_;
};

/// sum_lambda mu(lambda) xi(k | lambda)
double predicted_probability(const OntologicalModel& model, const std::string& prep,
                             const std::string& meas, std::size_t k);
std::vector<double> predicted_distribution(const OntologicalModel& model, const std::string& prep,
                                           const std::string& meas);

/// Two preparations whose quantum states are distinct vectors of one measured
/// basis (hence orthogonal) but whose supports intersect.
struct SupportClash {
    std::string first;
    std::string second;
    std::string measurement;
    std::vector<std::string> shared;
};

struct BornReport {
    struct Location {
        std::string preparation;
        std::string measurement;
        std::size_t outcome = 0;
    };
    double max_deviation = 0.0;
    std::optional<Location> worst_case;
    std::vector<SupportClash> support_clashes;
    double tolerance = 0.0;
    bool passed = true;
};

/// Orthogonal preparations that share support at threshold sqrt(tol).
/// Any model reproducing the Born rule to within tol has none; the converse
/// does not hold.
std::vector<SupportClash> orthogonal_support_clashes(const OntologicalModel& model,
                                                     const std::map<std::string, QuantumState>& states,
                                                     double tol);

/// Largest |predicted - Born| over every (preparation, measurement, outcome).
/// Passes iff that deviation is at most tol and no orthogonal pair clashes.
BornReport born_reproduction_check(const OntologicalModel& model,
                                   const std::map<std::string, QuantumState>& states, double tol);

/// q = sum_lambda min(mu1, mu2)
double classical_overlap(const EpistemicState& a, const EpistemicState& b);

EpistemicState product_distribution(const EpistemicState& a, const EpistemicState& b);

/// Labels with weight strictly above eps, in ontic-space order.
std::vector<std::string> support(const EpistemicState& mu, double eps = 1e-9);

/// Reference model with one ontic state per quantum state and Born-rule
/// responses. Preparation labels are the state labels; measurement labels are
/// the basis labels (falling back to "M<i>").
OntologicalModel make_psi_complete_model(std::span<const QuantumState> states,
                                         std::span<const Basis> bases);

struct SampleResult {
    std::vector<std::uint64_t> counts;
    std::vector<double> frequencies;
    std::uint64_t trials = 0;
};

/// Draws lambda ~ mu then k ~ xi(. | lambda) per trial. Deterministic in `seed`.
SampleResult sample_run(const OntologicalModel& model, const std::string& prep, const std::string& meas,
                        std::uint64_t trials, std::uint64_t seed);

/// sqrt(p (1 - p) / trials)
double binomial_sigma(double p, std::uint64_t trials);

/// A sample_run set against predicted_distribution, outcome by outcome.
struct SampleComparison {
    SampleResult sample;
    std::vector<double> predicted;
    std::vector<double> sigma;
    /// |frequency - predicted| / sigma, or 0 when both agree exactly.
    std::vector<double> deviation_sigmas;
    double nsigma = 4.0;
    /// Every outcome within nsigma * sigma of its prediction.
    bool within_envelope = true;
};

SampleComparison compare_sample(const OntologicalModel& model, const std::string& prep, const std::string& meas,
                                std::uint64_t trials, std::uint64_t seed, double nsigma = 4.0);

}  // namespace pbrlab
