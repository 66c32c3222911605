#include "pbrlab/overlap_search.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <utility>

#include "pbrlab/errors.hpp"
#include "pbrlab/pbr.hpp"

namespace pbrlab {

namespace {

using Matrix = std::vector<std::vector<double>>;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Box-Muller on 53-bit uniforms, so draws do not depend on the standard
// library's distribution implementations.
QuantumState random_state(std::size_t dim, std::mt19937_64& rng) {
    std::vector<Complex> a(dim);
    for (auto& x : a) {
        const double r = std::sqrt(-2.0 * std::log(1.0 - uniform01(rng)));
        const double th = 2.0 * std::numbers::pi * uniform01(rng);
        const double r2 = std::sqrt(-2.0 * std::log(1.0 - uniform01(rng)));
        const double th2 = 2.0 * std::numbers::pi * uniform01(rng);
        x = Complex(r * std::cos(th), r2 * std::sin(th2));
    }
    return QuantumState::normalized(std::move(a));
}

std::pair<std::string, std::string> pair_labels(const QuantumState& a, const QuantumState& b) {
    std::string x = a.label().empty() ? "psi1" : a.label();
    std::string y = b.label().empty() ? "psi2" : b.label();
    if (x == y) return {"psi1", "psi2"};
    return {x, y};
}

// Clamps solver noise and renormalizes.
std::vector<double> clean_distribution(std::span<const double> v) {
    std::vector<double> w(v.begin(), v.end());
    double s = 0.0;
    for (auto& x : w) {
        if (x < tol::kClamp) x = 0.0;
        s += x;
    }
    if (!(s > 0.0)) throw InvariantViolation("solver returned an empty distribution");
    for (auto& x : w) x /= s;
    return w;
}

// Row-stochastic table with entries below kClamp zeroed.
std::vector<double> clean_table(std::span<const double> v, std::size_t outcomes) {
    std::vector<double> t(v.begin(), v.end());
    for (std::size_t r = 0; r * outcomes < t.size(); ++r) {
        double s = 0.0;
        for (std::size_t k = 0; k < outcomes; ++k) {
            auto& x = t[r * outcomes + k];
            if (x < tol::kClamp) x = 0.0;
            s += x;
        }
        for (std::size_t k = 0; k < outcomes; ++k) t[r * outcomes + k] /= s;
    }
    return t;
}

bool structural_zero(double p) { return p <= tol::kStructuralZero; }

void add_band(LinearProgram& lp, std::vector<double> row, double target, double band) {
    auto lower = row;
    lp.add_constraint(std::move(row), Relation::kLessEqual, target + band);
    lp.add_constraint(std::move(lower), Relation::kGreaterEqual, target - band);
}

// Distribution LP with responses fixed. Variables: mu1, mu2, m.
LinearProgram distribution_lp(std::span<const Measurement> meas, const std::array<Matrix, 2>& targets,
                              std::size_t L, double band) {
    LinearProgram lp(3 * L);
    for (std::size_t l = 0; l < L; ++l) lp.objective[2 * L + l] = 1.0;
    for (std::size_t i = 0; i < 2; ++i) {
        std::vector<double> a(3 * L, 0.0);
        for (std::size_t l = 0; l < L; ++l) a[i * L + l] = 1.0;
        lp.add_constraint(std::move(a), Relation::kEqual, 1.0);
    }
    for (std::size_t l = 0; l < L; ++l) {
        for (std::size_t i = 0; i < 2; ++i) {
            std::vector<double> a(3 * L, 0.0);
            a[2 * L + l] = 1.0;
            a[i * L + l] = -1.0;
            lp.add_constraint(std::move(a), Relation::kLessEqual, 0.0);
        }
    }
    for (std::size_t j = 0; j < meas.size(); ++j) {
        const auto& xi = meas[j].response;
        for (std::size_t k = 0; k < xi.outcomes(); ++k) {
            for (std::size_t i = 0; i < 2; ++i) {
                const double p = targets[i][j][k];
                if (structural_zero(p)) {
                    // Every term is non-negative, so each must vanish.
                    for (std::size_t l = 0; l < L; ++l) {
                        if (xi(l, k) > tol::kStructuralZero) lp.upper[i * L + l] = 0.0;
                    }
                    continue;
                }
                std::vector<double> a(3 * L, 0.0);
                for (std::size_t l = 0; l < L; ++l) a[i * L + l] = xi(l, k);
                add_band(lp, std::move(a), p, band);
            }
        }
    }
    return lp;
}

// Response LP for one measurement with the preparations' distributions
// fixed: find xi(.|l) reproducing targets[i][k] for every weight vector i.
std::optional<std::vector<double>> solve_responses(std::span<const std::vector<double>> weights, const Matrix& targets,
                                                   std::size_t L, std::size_t K, double band) {
    LinearProgram lp(L * K);
    for (std::size_t l = 0; l < L; ++l) {
        std::vector<double> a(L * K, 0.0);
        for (std::size_t k = 0; k < K; ++k) a[l * K + k] = 1.0;
        lp.add_constraint(std::move(a), Relation::kEqual, 1.0);
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
        for (std::size_t k = 0; k < K; ++k) {
            const double p = targets[i][k];
            if (structural_zero(p)) {
                for (std::size_t l = 0; l < L; ++l) {
                    if (weights[i][l] > tol::kStructuralZero) lp.upper[l * K + k] = 0.0;
                }
                continue;
            }
            std::vector<double> a(L * K, 0.0);
            for (std::size_t l = 0; l < L; ++l) a[l * K + k] = weights[i][l];
            add_band(lp, std::move(a), p, band);
        }
    }
    auto sol = simplex_solve(lp);
    if (sol.status != LpStatus::kOptimal) return std::nullopt;
    return clean_table(sol.values, K);
}

std::vector<double> toward(std::span<const double> mu, std::size_t u, double t) {
    std::vector<double> w(mu.size());
    for (std::size_t l = 0; l < mu.size(); ++l) w[l] = (1.0 - t) * mu[l] + (l == u ? t : 0.0);
    return w;
}

struct Step {
    double t = 0.0;
    std::size_t point = 0;
    std::vector<std::vector<double>> tables;
};

// Largest t in [min_step, 1] (by bisection) for which `feasible(u, t)`
// yields response tables, maximized over u.
template <class Feasible>
std::optional<Step> best_step(std::size_t L, const OverlapSearchOptions& opt, Feasible&& feasible) {
    std::optional<Step> best;
    for (std::size_t u = 0; u < L; ++u) {
        auto at_min = feasible(u, opt.min_step);
        if (!at_min) continue;
        double lo = opt.min_step;
        auto tables = std::move(*at_min);
        if (auto full = feasible(u, 1.0)) {
            lo = 1.0;
            tables = std::move(*full);
        } else {
            double hi = 1.0;
            for (std::size_t s = 0; s < opt.bisection_steps && hi - lo > opt.min_step * 1e-3; ++s) {
                const double mid = 0.5 * (lo + hi);
                if (auto r = feasible(u, mid)) {
                    lo = mid;
                    tables = std::move(*r);
                } else {
                    hi = mid;
                }
            }
        }
        if (!best || lo > best->t) best = Step{lo, u, std::move(tables)};
    }
    return best;
}

std::array<Matrix, 2> born_targets(const QuantumState& psi1, const QuantumState& psi2, std::span<const Basis> bases) {
    std::array<Matrix, 2> t;
    for (const auto& b : bases) {
        t[0].push_back(born_distribution(psi1, b));
        t[1].push_back(born_distribution(psi2, b));
    }
    return t;
}

void attach_model(OverlapSearchResult& out, const QuantumState& psi1, const QuantumState& psi2,
                  const OnticSpacePtr& space, std::vector<double> mu1, std::vector<double> mu2,
                  std::vector<Measurement> meas, double tolerance) {
    auto [a, b] = pair_labels(psi1, psi2);
    out.first_label = a;
    out.second_label = b;
    out.first = EpistemicState(space, std::move(mu1));
    out.second = EpistemicState(space, std::move(mu2));
    std::map<std::string, EpistemicState> preps{{a, *out.first}, {b, *out.second}};
    std::map<std::string, Measurement> m;
    for (std::size_t j = 0; j < meas.size(); ++j) {
        const std::string label = meas[j].basis.label().empty() ? "M" + std::to_string(j) : meas[j].basis.label();
        m.emplace(label, std::move(meas[j]));
    }
    out.model = OntologicalModel(space, std::move(preps), std::move(m));
    const std::map<std::string, QuantumState> table{{a, psi1.with_label(a)}, {b, psi2.with_label(b)}};
    out.born = born_reproduction_check(*out.model, table, tolerance);
    if (!out.born->passed) throw InvariantViolation("overlap search produced a model that misses the Born rule");
    out.best_q = classical_overlap(*out.first, *out.second);
    out.feasible = true;
}

std::vector<Measurement> with_tables(std::span<const Basis> bases, const OnticSpacePtr& space,
                                     std::vector<std::vector<double>> tables) {
    std::vector<Measurement> m;
    for (std::size_t j = 0; j < bases.size(); ++j) {
        m.push_back({bases[j], ResponseFunction(space, bases[j].dim(), std::move(tables[j]))});
    }
    return m;
}

OverlapSearchResult alternate_once(const QuantumState& psi1, const QuantumState& psi2, std::span<const Basis> bases,
                                   std::size_t L, std::mt19937_64& rng, const OverlapSearchOptions& opt) {
    auto space = OnticSpace::indexed(L);
    std::vector<QuantumState> seeds{psi1, psi2};
    while (seeds.size() < L) seeds.push_back(random_state(psi1.dim(), rng));
    const auto meas = psi_complete_responses(seeds, bases);

    const auto targets = born_targets(psi1, psi2, bases);
    OverlapSearchResult cur = max_overlap_fixed_response(psi1, psi2, meas, L, opt);
    if (!cur.feasible) throw InvariantViolation("alternating search start is infeasible");
    cur.iterations = 1;

    while (cur.iterations < opt.max_iterations) {
        const double q = cur.best_q;
        if (q >= 1.0 - tol::kClamp) {
            cur.converged = true;
            break;
        }
        const auto mu1 = cur.first->weights();
        const auto mu2 = cur.second->weights();
        auto step = best_step(L, opt, [&](std::size_t u, double t) -> std::optional<std::vector<std::vector<double>>> {
            const std::array<std::vector<double>, 2> w{toward(mu1, u, t), toward(mu2, u, t)};
            std::vector<std::vector<double>> tables;
            for (std::size_t j = 0; j < bases.size(); ++j) {
                const Matrix tj{targets[0][j], targets[1][j]};
                auto r = solve_responses(w, tj, L, bases[j].dim(), opt.born_band);
                if (!r) return std::nullopt;
                tables.push_back(std::move(*r));
            }
            return tables;
        });
        if (!step || step->t * (1.0 - q) < opt.min_improvement) {
            cur.converged = true;
            break;
        }
        auto next = max_overlap_fixed_response(psi1, psi2, with_tables(bases, space, std::move(step->tables)), L, opt);
        ++cur.iterations;
        if (!next.feasible || next.best_q < q + opt.min_improvement) {
            if (next.feasible && next.best_q > q) {
                next.iterations = cur.iterations;
                cur = std::move(next);
            }
            cur.converged = true;
            break;
        }
        next.iterations = cur.iterations;
        cur = std::move(next);
    }
    cur.lower_bound = true;
    return cur;
}

// Product weights of the four PBR preparations from mu0 and mu+.
std::array<std::vector<double>, 4> product_weights(std::span<const double> m0, std::span<const double> mp) {
    const std::array<std::span<const double>, 4> f{m0, m0, mp, mp};
    const std::array<std::span<const double>, 4> s{m0, mp, m0, mp};
    std::array<std::vector<double>, 4> w;
    const std::size_t L = m0.size();
    for (std::size_t i = 0; i < 4; ++i) {
        w[i].resize(L * L);
        for (std::size_t a = 0; a < L; ++a) {
            for (std::size_t c = 0; c < L; ++c) w[i][a * L + c] = f[i][a] * s[i][c];
        }
    }
    return w;
}

OverlapSearchResult pbr_entangled_once(std::size_t L, std::mt19937_64& rng, const OverlapSearchOptions& opt) {
    const auto scenario = pbr_scenario();
    const auto table = forbidden_table(scenario);
    Matrix targets(4);
    for (std::size_t i = 0; i < 4; ++i) targets[i].assign(table[i].begin(), table[i].end());

    auto single = OnticSpace::indexed(L);
    auto pair = OnticSpace::product(*single, *single);
    std::vector<QuantumState> seeds{states::zero(), states::plus()};
    while (seeds.size() < L) seeds.push_back(random_state(2, rng));
    std::vector<QuantumState> joint;
    for (const auto& a : seeds) {
        for (const auto& c : seeds) joint.push_back(tensor(a, c));
    }
    const std::array<Basis, 1> basis{scenario.entangled_basis};
    const auto start = psi_complete_responses(joint, basis);
    auto xi = std::vector<double>(start[0].response.table().begin(), start[0].response.table().end());
    std::vector<double> m0(L, 0.0), mp(L, 0.0);
    m0[0] = 1.0;
    mp[1] = 1.0;

    OverlapSearchResult out;
    out.iterations = 0;
    while (out.iterations < opt.max_iterations) {
        ++out.iterations;
        const double q = classical_overlap(EpistemicState(single, m0), EpistemicState(single, mp));
        auto step = best_step(L, opt, [&](std::size_t u, double t) -> std::optional<std::vector<std::vector<double>>> {
            const auto w = product_weights(toward(m0, u, t), toward(mp, u, t));
            auto r = solve_responses(w, targets, L * L, 4, opt.born_band);
            if (!r) return std::nullopt;
            return std::vector<std::vector<double>>{std::move(*r)};
        });
        if (!step || step->t * (1.0 - q) < opt.min_improvement) {
            out.converged = true;
            break;
        }
        m0 = toward(m0, step->point, step->t);
        mp = toward(mp, step->point, step->t);
        xi = std::move(step->tables[0]);
    }

    const auto w = product_weights(m0, mp);
    std::map<std::string, EpistemicState> preps;
    std::map<std::string, QuantumState> states_table;
    for (std::size_t i = 0; i < 4; ++i) {
        preps.emplace(kPbrPreparations[i], EpistemicState(pair, w[i]));
        states_table.emplace(kPbrPreparations[i], scenario.product_states[i]);
    }
    std::map<std::string, Measurement> meas;
    meas.emplace(kPbrMeasurement, Measurement{scenario.entangled_basis, ResponseFunction(pair, 4, std::move(xi))});
    out.model = OntologicalModel(pair, std::move(preps), std::move(meas));
    out.born = born_reproduction_check(*out.model, states_table, opt.check_tolerance);
    if (!out.born->passed) throw InvariantViolation("PBR overlap search produced a model that misses the Born rule");
    out.first_label = "0";
    out.second_label = "+";
    out.first = EpistemicState(single, std::move(m0));
    out.second = EpistemicState(single, std::move(mp));
    out.best_q = classical_overlap(*out.first, *out.second);
    out.feasible = true;
    out.lower_bound = true;
    return out;
}

std::mt19937_64 restart_rng(std::uint64_t seed, std::size_t restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    return std::mt19937_64(seq);
}

}  // namespace

OverlapSearchResult max_overlap_fixed_response(const QuantumState& psi1, const QuantumState& psi2,
                                               std::span<const Measurement> measurements, std::size_t grid,
                                               const OverlapSearchOptions& options) {
    if (psi1.dim() != psi2.dim()) throw DimensionMismatch("overlap search: states differ in dimension");
    OnticSpacePtr space;
    for (const auto& m : measurements) {
        if (m.basis.dim() != psi1.dim()) throw DimensionMismatch("overlap search: basis dimension differs from states");
        if (!space) space = m.response.space();
        if (!(*m.response.space() == *space)) throw InvalidArgument("overlap search: responses use different spaces");
    }
    if (space && grid != 0 && grid != space->size()) throw DimensionMismatch("overlap search: grid differs from responses");
    if (!space) {
        if (grid < 1) throw InvalidArgument("overlap search needs a grid of at least 1 point");
        space = OnticSpace::indexed(grid);
    }
    const std::size_t L = space->size();
    std::vector<Basis> bases;
    for (const auto& m : measurements) bases.push_back(m.basis);
    const auto targets = born_targets(psi1, psi2, bases);

    OverlapSearchResult out;
    out.restarts = 1;
    out.iterations = 1;
    out.converged = true;
    const auto sol = simplex_solve(distribution_lp(measurements, targets, L, options.born_band));
    if (sol.status != LpStatus::kOptimal) {
        auto [a, b] = pair_labels(psi1, psi2);
        out.first_label = a;
        out.second_label = b;
        return out;
    }
    std::span<const double> v(sol.values);
    attach_model(out, psi1, psi2, space, clean_distribution(v.subspan(0, L)), clean_distribution(v.subspan(L, L)),
                 std::vector<Measurement>(measurements.begin(), measurements.end()), options.check_tolerance);
    return out;
}

OverlapSearchResult max_overlap_alternating(const QuantumState& psi1, const QuantumState& psi2,
                                            std::span<const Basis> measurements, std::size_t grid,
                                            std::size_t restarts, std::uint64_t seed,
                                            const OverlapSearchOptions& options) {
    if (restarts < 1) throw InvalidArgument("alternating search needs at least one restart");
    if (grid < 2) throw InvalidArgument("alternating search needs a grid of at least 2 points");
    if (psi1.dim() != psi2.dim()) throw DimensionMismatch("overlap search: states differ in dimension");
    std::optional<OverlapSearchResult> best;
    for (std::size_t r = 0; r < restarts; ++r) {
        auto rng = restart_rng(seed, r);
        auto res = alternate_once(psi1, psi2, measurements, grid, rng, options);
        if (!best || res.best_q > best->best_q + options.min_improvement) best = std::move(res);
    }
    best->restarts = restarts;
    return std::move(*best);
}

const char* to_string(PbrConstraintSet set) {
    switch (set) {
        case PbrConstraintSet::kEntangled: return "entangled";
        case PbrConstraintSet::kNone: return "none";
        case PbrConstraintSet::kSingleSystemZ: return "z";
    }
    return "?";
}

PbrConstraintSet pbr_constraint_set_from_string(const std::string& name) {
    for (auto s : {PbrConstraintSet::kEntangled, PbrConstraintSet::kNone, PbrConstraintSet::kSingleSystemZ}) {
        if (name == to_string(s)) return s;
    }
    throw InvalidArgument("unknown PBR constraint set '" + name + "' (expected entangled, none or z)");
}

OverlapSearchResult pbr_overlap_bound(std::size_t grid, PbrConstraintSet set, std::size_t restarts,
                                      std::uint64_t seed, const OverlapSearchOptions& options) {
    const auto zero = states::zero();
    const auto plus = states::plus();
    if (set == PbrConstraintSet::kNone) return max_overlap_alternating(zero, plus, {}, grid, restarts, seed, options);
    if (set == PbrConstraintSet::kSingleSystemZ) {
        const std::array<Basis, 1> z{z_basis()};
        return max_overlap_alternating(zero, plus, z, grid, restarts, seed, options);
    }
    if (restarts < 1) throw InvalidArgument("PBR overlap search needs at least one restart");
    if (grid < 2) throw InvalidArgument("PBR overlap search needs a grid of at least 2 points");
    std::optional<OverlapSearchResult> best;
    for (std::size_t r = 0; r < restarts; ++r) {
        auto rng = restart_rng(seed, r);
        auto res = pbr_entangled_once(grid, rng, options);
        if (!best || res.best_q > best->best_q + options.min_improvement) best = std::move(res);
    }
    best->restarts = restarts;
    return std::move(*best);
}

std::vector<Measurement> psi_complete_responses(std::span<const QuantumState> states, std::span<const Basis> bases) {
    if (states.empty()) throw InvalidArgument("psi-complete responses need at least one state");
    auto space = OnticSpace::indexed(states.size());
    std::vector<Measurement> out;
    for (const auto& b : bases) {
        std::vector<double> table;
        table.reserve(states.size() * b.dim());
        for (const auto& s : states) {
            const auto p = born_distribution(s, b);
            table.insert(table.end(), p.begin(), p.end());
        }
        out.push_back({b, ResponseFunction(space, b.dim(), std::move(table))});
    }
    return out;
}

std::vector<QuantumState> great_circle_states(std::size_t n, double offset) {
    std::vector<QuantumState> out;
    for (std::size_t l = 0; l < n; ++l) {
        const double theta = 2.0 * std::numbers::pi * (static_cast<double>(l) + offset) / static_cast<double>(n);
        out.push_back(QuantumState::normalized({std::cos(theta / 2.0), std::sin(theta / 2.0)}, "g" + std::to_string(l)));
    }
    return out;
}

double overlap_upper_bound(const QuantumState& psi1, const QuantumState& psi2, std::span<const Basis> measurements) {
    double bound = 1.0;
    for (const auto& b : measurements) {
        const auto p = born_distribution(psi1, b);
        const auto q = born_distribution(psi2, b);
        double s = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) s += std::min(p[k], q[k]);
        bound = std::min(bound, s);
    }
    return bound;
}

}  // namespace pbrlab
