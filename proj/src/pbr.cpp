#include "pbrlab/pbr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "pbrlab/errors.hpp"
#include "pbrlab/tolerances.hpp"

namespace pbrlab {

namespace {

constexpr std::size_t kOutcomes = 4;

QuantumState pair_sum(const QuantumState& a, const QuantumState& b, const QuantumState& c, const QuantumState& d,
                      std::string label) {
    const std::array<Complex, 2> coeffs{1.0, 1.0};
    const std::array<QuantumState, 2> terms{tensor(a, b), tensor(c, d)};
    return superpose(coeffs, terms, std::move(label));
}

// mu_i on the product space for the four preparations, sharing one space.
struct ProductPreparations {
    OnticSpacePtr space;
    std::array<std::vector<double>, 4> weights;
};

ProductPreparations product_preparations(const PbrOverlapPair& pair) {
    ProductPreparations out;
    out.space = OnticSpace::product(*pair.space, *pair.space);
    const std::array<const EpistemicState*, 4> first{&pair.zero, &pair.zero, &pair.plus, &pair.plus};
    const std::array<const EpistemicState*, 4> second{&pair.zero, &pair.plus, &pair.zero, &pair.plus};
    const std::size_t n = pair.space->size();
    for (std::size_t i = 0; i < 4; ++i) {
        auto& w = out.weights[i];
        w.resize(n * n);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t c = 0; c < n; ++c) w[a * n + c] = (*first[i])[a] * (*second[i])[c];
        }
    }
    return out;
}

std::size_t xi_index(std::size_t lambda, std::size_t k) { return lambda * kOutcomes + k; }

// Response-table variables, stochastic rows, and the Born rows selected by
// `full_born`. With `slack` every Born row gets L1 slack variables appended
// and the objective minimizes their total; otherwise the rows are hard.
LinearProgram build_lp(const ProductPreparations& preps, const ForbiddenTable& table, bool full_born, bool slack) {
    const std::size_t points = preps.space->size();
    const std::size_t base = points * kOutcomes;

    struct BornRow {
        std::size_t prep, outcome;
        double target;
        bool forbidden;
    };
    std::vector<BornRow> rows;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t k = 0; k < kOutcomes; ++k) {
            const bool forbidden = (i == k);
            if (!forbidden && !full_born) continue;
            rows.push_back({i, k, forbidden ? 0.0 : table[i][k], forbidden});
        }
    }
    // Forbidden rows need one slack (the left side is non-negative); the
    // others need a pair.
    std::size_t slack_vars = 0;
    if (slack) {
        for (const auto& r : rows) slack_vars += r.forbidden ? 1 : 2;
    }

    LinearProgram lp(base + slack_vars);
    for (std::size_t v = 0; v < base; ++v) lp.upper[v] = 1.0;
    for (std::size_t v = base; v < base + slack_vars; ++v) lp.objective[v] = -1.0;

    for (std::size_t lambda = 0; lambda < points; ++lambda) {
        std::vector<double> a(lp.num_vars(), 0.0);
        for (std::size_t k = 0; k < kOutcomes; ++k) a[xi_index(lambda, k)] = 1.0;
        lp.add_constraint(std::move(a), Relation::kEqual, 1.0);
    }
    std::size_t s = base;
    for (const auto& r : rows) {
        std::vector<double> a(lp.num_vars(), 0.0);
        for (std::size_t lambda = 0; lambda < points; ++lambda) a[xi_index(lambda, r.outcome)] = preps.weights[r.prep][lambda];
        if (slack) {
            a[s++] = -1.0;
            if (!r.forbidden) a[s++] = 1.0;
        }
        if (r.forbidden || slack) {
            lp.add_constraint(std::move(a), Relation::kEqual, r.target);
        } else {
            auto b = a;
            lp.add_constraint(std::move(a), Relation::kLessEqual, r.target + tol::kBornBand);
            lp.add_constraint(std::move(b), Relation::kGreaterEqual, r.target - tol::kBornBand);
        }
    }
    return lp;
}

ResponseFunction response_from(const OnticSpacePtr& space, std::span<const double> values) {
    std::vector<double> table(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(space->size() * kOutcomes));
    for (auto& v : table) v = std::clamp(v, 0.0, 1.0);
    return ResponseFunction(space, kOutcomes, std::move(table));
}

double forbidden_probability(const ProductPreparations& preps, const ResponseFunction& xi, std::size_t i) {
    double p = 0.0;
    for (std::size_t lambda = 0; lambda < xi.size(); ++lambda) p += preps.weights[i][lambda] * xi(lambda, i);
    return p;
}

OntologicalModel product_model(const ProductPreparations& preps, ResponseFunction xi) {
    std::map<std::string, EpistemicState> p;
    for (std::size_t i = 0; i < 4; ++i) p.emplace(kPbrPreparations[i], EpistemicState(preps.space, preps.weights[i]));
    std::map<std::string, Measurement> m;
    m.emplace(kPbrMeasurement, Measurement{pbr_entangled_basis(), std::move(xi)});
    return OntologicalModel(preps.space, std::move(p), std::move(m));
}

void require_q(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("overlap q must lie in [0, 1]");
}

}  // namespace

std::array<QuantumState, 4> pbr_product_states() {
    const auto z = states::zero();
    const auto p = states::plus();
    return {tensor(z, z), tensor(z, p), tensor(p, z), tensor(p, p)};
}

Basis pbr_entangled_basis() {
    const auto z = states::zero();
    const auto o = states::one();
    const auto p = states::plus();
    const auto m = states::minus();
    return Basis({pair_sum(z, o, o, z, "phi1"), pair_sum(z, m, o, p, "phi2"), pair_sum(p, o, m, z, "phi3"),
                  pair_sum(p, m, m, p, "phi4")},
                 kPbrMeasurement);
}

PbrScenario pbr_scenario() {
    PbrScenario s{pbr_product_states(), pbr_entangled_basis(), {}};
    for (std::size_t i = 0; i < 4; ++i) {
        s.forbidden[i] = {i, i};
        if (std::abs(inner_product(s.entangled_basis[i], s.product_states[i])) > tol::kNorm) {
            throw InvariantViolation("forbidden pair " + std::to_string(i) + " is not orthogonal");
        }
    }
    return s;
}

ForbiddenTable forbidden_table(const PbrScenario& scenario) {
    ForbiddenTable t{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t k = 0; k < 4; ++k) t[i][k] = born_probability(scenario.product_states[i], scenario.entangled_basis[k]);
    }
    return t;
}

PbrOverlapPair pbr_overlap_pair(double q, std::size_t grid) {
    require_q(q);
    std::size_t block = 0;
    if (q == 1.0) {
        block = grid;
    } else if (q > 0.0) {
        if (grid < 3) throw InvalidArgument("overlap 0 < q < 1 needs a grid of at least 3 points");
        block = std::min(static_cast<std::size_t>(std::ceil(q * static_cast<double>(grid) - 1e-12)), grid - 2);
        block = std::max<std::size_t>(block, 1);
    } else if (grid < 2) {
        throw InvalidArgument("disjoint distributions need a grid of at least 2 points");
    }
    if (grid < 1) throw InvalidArgument("grid must be positive");
    const std::size_t rest = grid - block;
    const std::size_t n_zero = (rest + 1) / 2;
    const std::size_t n_plus = rest - n_zero;

    std::vector<std::string> labels;
    for (std::size_t i = 0; i < block; ++i) labels.push_back("s" + std::to_string(i));
    for (std::size_t i = 0; i < n_zero; ++i) labels.push_back("z" + std::to_string(i));
    for (std::size_t i = 0; i < n_plus; ++i) labels.push_back("p" + std::to_string(i));
    auto space = std::make_shared<const OnticSpace>(std::move(labels));

    std::vector<double> zero(grid, 0.0), plus(grid, 0.0);
    for (std::size_t i = 0; i < block; ++i) zero[i] = plus[i] = q / static_cast<double>(block);
    for (std::size_t i = 0; i < n_zero; ++i) zero[block + i] = (1.0 - q) / static_cast<double>(n_zero);
    for (std::size_t i = 0; i < n_plus; ++i) plus[block + n_zero + i] = (1.0 - q) / static_cast<double>(n_plus);
    return PbrOverlapPair{space, EpistemicState(space, std::move(zero)), EpistemicState(space, std::move(plus)), block};
}

PbrFeasibilityResult pbr_feasibility(double q, std::size_t grid, const PbrFeasibilityOptions& options) {
    const auto pair = pbr_overlap_pair(q, grid);
    const auto preps = product_preparations(pair);
    const auto table = forbidden_table(pbr_scenario());

    PbrFeasibilityResult out;
    out.q = q;
    out.grid = grid;
    out.block_size = pair.block_size;
    out.full_born = options.full_born;
    out.product_space = preps.space;
    out.lp = build_lp(preps, table, options.full_born, false);
    out.solution = simplex_solve(out.lp);

    const auto slack_lp = build_lp(preps, table, options.full_born, true);
    const auto slack = simplex_solve(slack_lp);
    if (slack.status != LpStatus::kOptimal) throw InvariantViolation("slack LP must be feasible and bounded");
    out.min_violation = std::max(0.0, -slack.objective_value);
    out.least_violation_response = response_from(preps.space, slack.values);
    for (std::size_t i = 0; i < 4; ++i) {
        out.forbidden_probability[i] = forbidden_probability(preps, *out.least_violation_response, i);
    }

    if (out.solution.status == LpStatus::kOptimal) {
        out.response = response_from(preps.space, out.solution.values);
        return out;
    }
    if (out.solution.status != LpStatus::kInfeasible) throw InvariantViolation("feasibility LP reported unbounded");
    const bool verified = verify_farkas(out.lp, out.solution.certificate);
    if (!verified) throw InvariantViolation("Farkas certificate of the PBR LP does not verify");

    // Product points that every preparation reaches: no outcome is allowed there.
    nlohmann::ordered_json block = nlohmann::ordered_json::array();
    double block_mass = 0.0;
    for (std::size_t lambda = 0; lambda < preps.space->size(); ++lambda) {
        bool all = true;
        for (const auto& w : preps.weights) all = all && w[lambda] > 0.0;
        if (!all) continue;
        block.push_back((*preps.space)[lambda]);
        block_mass += preps.weights[0][lambda];
    }
    std::size_t nonzero = 0;
    for (double y : out.solution.certificate) nonzero += (std::abs(y) > tol::kFeasibility);

    nlohmann::ordered_json violated = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < 4; ++i) {
        violated.push_back({{"preparation", kPbrPreparations[i]},
                            {"outcome", pbr_entangled_basis()[i].label()},
                            {"born", 0.0},
                            {"model", out.forbidden_probability[i]}});
    }
    nlohmann::ordered_json witness = {
        {"q", q},
        {"grid", grid},
        {"block_size", pair.block_size},
        {"constraints", options.full_born ? "all sixteen Born probabilities" : "four forbidden outcomes only"},
        {"shared_product_block", block},
        {"shared_product_mass", block_mass},
        {"violated", violated},
        {"farkas", {{"verified", verified}, {"rows", out.solution.certificate.size()}, {"nonzero", nonzero}}},
    };
    out.certificate = make_certificate(CertificateKind::kLpInfeasible, out.min_violation, std::move(witness));
    return out;
}

OntologicalModel make_pbr_overlap_model(double q, std::size_t grid, PbrResponse response) {
    const auto pair = pbr_overlap_pair(q, grid);
    const auto preps = product_preparations(pair);
    if (response == PbrResponse::kLpOptimal) {
        auto r = pbr_feasibility(q, grid);
        return product_model(preps, std::move(*r.least_violation_response));
    }
    const std::size_t points = preps.space->size();
    std::vector<double> table(points * kOutcomes, 0.0);
    for (std::size_t lambda = 0; lambda < points; ++lambda) {
        std::array<bool, 4> reached{};
        bool all = true;
        for (std::size_t i = 0; i < 4; ++i) {
            reached[i] = preps.weights[i][lambda] > 0.0;
            all = all && reached[i];
        }
        if (all) {
            for (std::size_t k = 0; k < kOutcomes; ++k) table[xi_index(lambda, k)] = 0.25;
            continue;
        }
        std::size_t k = 0;
        while (reached[k]) ++k;
        table[xi_index(lambda, k)] = 1.0;
    }
    return product_model(preps, ResponseFunction(preps.space, kOutcomes, std::move(table)));
}

OntologicalModel make_pbr_psi_complete_model() {
    const auto s = pbr_product_states();
    const std::array<Basis, 1> bases{pbr_entangled_basis()};
    return make_psi_complete_model(s, bases);
}

PbrProtocolResult run_pbr_protocol(const OntologicalModel& model, std::uint64_t trials, std::uint64_t seed) {
    const auto& meas = model.measurement(kPbrMeasurement);
    if (meas.response.outcomes() != kOutcomes) throw InvalidArgument("PBR measurement must have four outcomes");
    PbrProtocolResult out;
    out.trials = trials;
    out.seed = seed;
    for (std::size_t i = 0; i < 4; ++i) {
        const std::string prep = kPbrPreparations[i];
        model.preparation(prep);
        auto& e = out.entries[i];
        e.preparation = prep;
        e.forbidden_outcome = i;
        e.predicted = predicted_probability(model, prep, kPbrMeasurement, i);
        e.frequency = sample_run(model, prep, kPbrMeasurement, trials, seed + i).frequencies[i];
        e.sigma = binomial_sigma(e.predicted, trials);
        out.max_predicted = std::max(out.max_predicted, e.predicted);
    }
    return out;
}

}  // namespace pbrlab
