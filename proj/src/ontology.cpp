#include "pbrlab/ontology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <utility>

#include "pbrlab/errors.hpp"
#include "pbrlab/tolerances.hpp"

namespace pbrlab {

namespace {

void require_same_space(const OnticSpacePtr& a, const OnticSpacePtr& b, const char* what) {
    if (a != b && !(*a == *b)) throw InvalidArgument(std::string(what) + ": ontic spaces differ");
}

// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t draw(std::span<const double> weights, std::mt19937_64& rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        last_positive = i;
        acc += weights[i];
        if (u < acc) return i;
    }
    // Rounding can leave the cumulative sum just below u.
    return last_positive;
}

}  // namespace

OnticSpace::OnticSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw InvalidArgument("ontic space must be non-empty");
    std::set<std::string> seen;
    for (const auto& l : labels_) {
        if (!seen.insert(l).second) throw InvalidArgument("duplicate ontic label '" + l + "'");
    }
}

std::shared_ptr<const OnticSpace> OnticSpace::indexed(std::size_t size, const std::string& prefix) {
    std::vector<std::string> labels;
    labels.reserve(size);
    for (std::size_t i = 0; i < size; ++i) labels.push_back(prefix + std::to_string(i));
    return std::make_shared<const OnticSpace>(std::move(labels));
}

std::shared_ptr<const OnticSpace> OnticSpace::product(const OnticSpace& a, const OnticSpace& b) {
    std::vector<std::string> labels;
    labels.reserve(a.size() * b.size());
    for (const auto& x : a.labels()) {
        for (const auto& y : b.labels()) labels.push_back("(" + x + "," + y + ")");
    }
    return std::make_shared<const OnticSpace>(std::move(labels));
}

std::optional<std::size_t> OnticSpace::index_of(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

EpistemicState::EpistemicState(OnticSpacePtr space, std::vector<double> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
    if (!space_) throw InvalidArgument("epistemic state needs an ontic space");
    if (weights_.size() != space_->size()) throw DimensionMismatch("weights length differs from ontic space size");
    double total = 0.0;
    for (auto& w : weights_) {
        if (!std::isfinite(w)) throw InvalidArgument("non-finite epistemic weight");
        if (w < 0.0) {
            if (w < -tol::kClamp) throw InvalidArgument("negative epistemic weight " + std::to_string(w));
            w = 0.0;
        }
        total += w;
    }
    if (std::abs(total - 1.0) > tol::kDistribution) {
        throw InvalidArgument("epistemic weights sum to " + std::to_string(total));
    }
}

EpistemicState EpistemicState::point_mass(OnticSpacePtr space, std::size_t index) {
    if (!space || index >= space->size()) throw InvalidArgument("point mass index out of range");
    std::vector<double> w(space->size(), 0.0);
    w[index] = 1.0;
    return EpistemicState(std::move(space), std::move(w));
}

EpistemicState EpistemicState::uniform(OnticSpacePtr space) {
    if (!space) throw InvalidArgument("epistemic state needs an ontic space");
    const std::size_t n = space->size();
    return EpistemicState(std::move(space), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ResponseFunction::ResponseFunction(OnticSpacePtr space, std::size_t outcomes, std::vector<double> table)
    : space_(std::move(space)), outcomes_(outcomes), table_(std::move(table)) {
    if (!space_) throw InvalidArgument("response function needs an ontic space");
    if (outcomes_ == 0) throw InvalidArgument("response function needs at least one outcome");
    if (table_.size() != space_->size() * outcomes_) throw DimensionMismatch("response table must be L x K");
    for (std::size_t l = 0; l < space_->size(); ++l) {
        double row_sum = 0.0;
        for (std::size_t k = 0; k < outcomes_; ++k) {
            double& v = table_[l * outcomes_ + k];
            if (!std::isfinite(v) || v < -tol::kNorm || v > 1.0 + tol::kNorm) {
                throw InvalidArgument("response entry out of [0,1] at " + (*space_)[l]);
            }
            v = std::clamp(v, 0.0, 1.0);
            row_sum += v;
        }
        if (std::abs(row_sum - 1.0) > tol::kDistribution) {
            throw InvalidArgument("response row for " + (*space_)[l] + " sums to " + std::to_string(row_sum));
        }
    }
}

OntologicalModel::OntologicalModel(OnticSpacePtr space, std::map<std::string, EpistemicState> preparations,
                                   std::map<std::string, Measurement> measurements)
    : space_(std::move(space)), preparations_(std::move(preparations)), measurements_(std::move(measurements)) {
    if (!space_) throw InvalidArgument("ontological model needs an ontic space");
    for (const auto& [label, mu] : preparations_) require_same_space(space_, mu.space(), label.c_str());
    for (const auto& [label, m] : measurements_) {
        require_same_space(space_, m.response.space(), label.c_str());
        if (m.response.outcomes() != m.basis.dim()) {
            throw DimensionMismatch("measurement '" + label + "' has " + std::to_string(m.response.outcomes()) +
                                    " outcomes but basis dimension " + std::to_string(m.basis.dim()));
        }
    }
}

const EpistemicState& OntologicalModel::preparation(const std::string& label) const {
    const auto it = preparations_.find(label);
    if (it == preparations_.end()) throw UnknownLabel("unknown preparation '" + label + "'");
    return it->second;
}

const Measurement& OntologicalModel::measurement(const std::string& label) const {
    const auto it = measurements_.find(label);
    if (it == measurements_.end()) throw UnknownLabel("unknown measurement '" + label + "'");
    return it->second;
}

double predicted_probability(const OntologicalModel& model, const std::string& prep, const std::string& meas,
                             std::size_t k) {
    const auto& mu = model.preparation(prep);
    const auto& xi = model.measurement(meas).response;
    if (k >= xi.outcomes()) throw InvalidArgument("outcome index out of range");
    double p = 0.0;
    for (std::size_t l = 0; l < mu.size(); ++l) p += mu[l] * xi(l, k);
    return p;
}

std::vector<double> predicted_distribution(const OntologicalModel& model, const std::string& prep,
                                           const std::string& meas) {
    const auto& xi = model.measurement(meas).response;
    std::vector<double> p(xi.outcomes());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = predicted_probability(model, prep, meas, k);
    return p;
}

std::vector<SupportClash> orthogonal_support_clashes(const OntologicalModel& model,
                                                     const std::map<std::string, QuantumState>& states,
                                                     double tol) {
    const double delta = std::sqrt(std::max(tol, 0.0));
    std::vector<SupportClash> clashes;
    for (const auto& [meas_label, m] : model.measurements()) {
        // Which basis vector (if any) each preparation's state is.
        std::vector<std::pair<std::string, std::size_t>> members;
        for (const auto& [prep_label, mu] : model.preparations()) {
            const auto st = states.find(prep_label);
            if (st == states.end() || st->second.dim() != m.basis.dim()) continue;
            for (std::size_t k = 0; k < m.basis.dim(); ++k) {
                if (phase_equivalent(st->second, m.basis[k], tol::kNorm * 10)) {
                    members.emplace_back(prep_label, k);
                    break;
                }
            }
        }
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                if (members[i].second == members[j].second) continue;
                const auto a = support(model.preparation(members[i].first), delta);
                const auto b = support(model.preparation(members[j].first), delta);
                std::vector<std::string> shared;
                std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
                if (!shared.empty()) {
                    clashes.push_back({members[i].first, members[j].first, meas_label, std::move(shared)});
                }
            }
        }
    }
    return clashes;
}

BornReport born_reproduction_check(const OntologicalModel& model,
                                   const std::map<std::string, QuantumState>& states, double tol) {
    BornReport report;
    report.tolerance = tol;
    for (const auto& [prep_label, mu] : model.preparations()) {
        const auto st = states.find(prep_label);
        if (st == states.end()) throw UnknownLabel("no quantum state for preparation '" + prep_label + "'");
        for (const auto& [meas_label, m] : model.measurements()) {
            if (st->second.dim() != m.basis.dim()) {
                throw DimensionMismatch("state '" + prep_label + "' and measurement '" + meas_label + "'");
            }
            for (std::size_t k = 0; k < m.basis.dim(); ++k) {
                const double dev = std::abs(predicted_probability(model, prep_label, meas_label, k) -
                                            born_probability(st->second, m.basis[k]));
                if (!report.worst_case || dev > report.max_deviation) {
                    report.max_deviation = dev;
                    report.worst_case = BornReport::Location{prep_label, meas_label, k};
                }
            }
        }
    }
    report.support_clashes = orthogonal_support_clashes(model, states, tol);
    report.passed = report.max_deviation <= tol && report.support_clashes.empty();
    return report;
}

double classical_overlap(const EpistemicState& a, const EpistemicState& b) {
    require_same_space(a.space(), b.space(), "classical_overlap");
    double q = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l) q += std::min(a[l], b[l]);
    return std::clamp(q, 0.0, 1.0);
}

EpistemicState product_distribution(const EpistemicState& a, const EpistemicState& b) {
    auto space = OnticSpace::product(*a.space(), *b.space());
    std::vector<double> w;
    w.reserve(space->size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) w.push_back(a[i] * b[j]);
    }
    return EpistemicState(std::move(space), std::move(w));
}

std::vector<std::string> support(const EpistemicState& mu, double eps) {
    if (eps < 0.0) throw InvalidArgument("support threshold must be non-negative");
    std::vector<std::string> out;
    for (std::size_t l = 0; l < mu.size(); ++l) {
        if (mu[l] > eps) out.push_back((*mu.space())[l]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

OntologicalModel make_psi_complete_model(std::span<const QuantumState> states, std::span<const Basis> bases) {
    if (states.empty()) throw InvalidArgument("psi-complete model needs at least one state");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < states.size(); ++i) {
        labels.push_back(states[i].label().empty() ? "psi" + std::to_string(i) : states[i].label());
    }
    auto space = std::make_shared<const OnticSpace>(labels);

    std::map<std::string, EpistemicState> preps;
    for (std::size_t i = 0; i < states.size(); ++i) preps.emplace(labels[i], EpistemicState::point_mass(space, i));

    std::map<std::string, Measurement> meas;
    for (std::size_t b = 0; b < bases.size(); ++b) {
        const auto& basis = bases[b];
        std::vector<double> table;
        table.reserve(states.size() * basis.dim());
        for (const auto& s : states) {
            const auto p = born_distribution(s, basis);
            table.insert(table.end(), p.begin(), p.end());
        }
        const std::string label = basis.label().empty() ? "M" + std::to_string(b) : basis.label();
        if (!meas.emplace(label, Measurement{basis, ResponseFunction(space, basis.dim(), std::move(table))}).second) {
            throw InvalidArgument("duplicate measurement label '" + label + "'");
        }
    }
    return OntologicalModel(space, std::move(preps), std::move(meas));
}

SampleResult sample_run(const OntologicalModel& model, const std::string& prep, const std::string& meas,
                        std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw InvalidArgument("sample_run needs at least one trial");
    const auto& mu = model.preparation(prep);
    const auto& xi = model.measurement(meas).response;
    std::mt19937_64 rng(seed);
    SampleResult out;
    out.trials = trials;
    out.counts.assign(xi.outcomes(), 0);
    for (std::uint64_t t = 0; t < trials; ++t) {
        const std::size_t lambda = draw(mu.weights(), rng);
        ++out.counts[draw(xi.row(lambda), rng)];
    }
    out.frequencies.reserve(out.counts.size());
    for (auto c : out.counts) out.frequencies.push_back(static_cast<double>(c) / static_cast<double>(trials));
    return out;
}

double binomial_sigma(double p, std::uint64_t trials) {
    if (trials < 1) throw InvalidArgument("binomial_sigma needs at least one trial");
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(trials));
}

SampleComparison compare_sample(const OntologicalModel& model, const std::string& prep, const std::string& meas,
                                std::uint64_t trials, std::uint64_t seed, double nsigma) {
    if (!(nsigma > 0.0)) throw InvalidArgument("compare_sample needs a positive envelope width");
    SampleComparison out;
    out.sample = sample_run(model, prep, meas, trials, seed);
    out.predicted = predicted_distribution(model, prep, meas);
    out.nsigma = nsigma;
    for (std::size_t k = 0; k < out.predicted.size(); ++k) {
        const double s = binomial_sigma(out.predicted[k], trials);
        const double gap = std::abs(out.sample.frequencies[k] - out.predicted[k]);
        out.sigma.push_back(s);
        // A deterministic outcome has sigma 0; round-off in predicted stays inside kDistribution.
        const double z = s > 0.0 ? gap / s : (gap <= tol::kDistribution ? 0.0 : std::numeric_limits<double>::infinity());
        out.deviation_sigmas.push_back(z);
        if (z > nsigma) out.within_envelope = false;
    }
    return out;
}

}  // namespace pbrlab
