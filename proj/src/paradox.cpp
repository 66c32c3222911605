#include "pbrlab/paradox.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <set>
#include <utility>

#include "pbrlab/errors.hpp"
#include "pbrlab/tolerances.hpp"

namespace pbrlab {

namespace {

bool orthogonal(const QuantumState& a, const QuantumState& b) { return std::abs(inner_product(a, b)) <= tol::kNorm; }

std::vector<std::string> shared_support(const EpistemicState& a, const EpistemicState& b) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > tol::kSupport && b[i] > tol::kSupport) out.push_back((*a.space())[i]);
    }
    return out;
}

ClosureResult mixture_check(const ClosureFamily& family, std::size_t grid) {
    ClosureResult out;
    out.rule = SupportRule::kMixture;
    out.grid = grid;
    auto space = OnticSpace::indexed(grid);
    const std::size_t half = (grid + 1) / 2;
    std::vector<double> w1(grid, 0.0), w2(grid, 0.0);
    for (std::size_t i = 0; i < half; ++i) w1[i] = 1.0 / static_cast<double>(half);
    for (std::size_t i = half; i < grid; ++i) w2[i] = 1.0 / static_cast<double>(grid - half);
    const EpistemicState mu1(space, w1), mu2(space, w2);
    out.distributions.emplace(family.first().label(), mu1);
    out.distributions.emplace(family.second().label(), mu2);
    for (const auto& d : family.derived()) {
        const double a = std::norm(d.coeffs[0]);
        const double b = std::norm(d.coeffs[1]);
        std::vector<double> w(grid);
        for (std::size_t i = 0; i < grid; ++i) w[i] = (a * w1[i] + b * w2[i]) / (a + b);
        out.distributions.emplace(d.state.label(), EpistemicState(space, std::move(w)));
    }

    const auto states = family.all_states();
    double worst = 0.0;
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            if (!orthogonal(states[i], states[j])) continue;
            const auto& mi = out.distributions.at(states[i].label());
            const auto& mj = out.distributions.at(states[j].label());
            OrthogonalPairOverlap p{states[i].label(), states[j].label(), classical_overlap(mi, mj),
                                    shared_support(mi, mj)};
            worst = std::max(worst, p.overlap);
            if (p.overlap > tol::kSupport) {
                pairs.push_back({{"first", p.first}, {"second", p.second}, {"overlap", p.overlap}, {"required", 0.0},
                                 {"shared_points", p.shared.size()}});
            }
            out.orthogonal_pairs.push_back(std::move(p));
        }
    }
    if (worst > tol::kSupport) {
        nlohmann::ordered_json witness = {
            {"rule", "mixture"},
            {"grid", grid},
            {"combination_weights", "Born weights |alpha|^2, |beta|^2 of the component states"},
            {"premise", "orthogonal states must have disjoint supports in a Born-reproducing model"},
            {"clashing_pairs", pairs},
        };
        out.certificate = make_certificate(CertificateKind::kSupportClash, worst, std::move(witness));
    }
    return out;
}

ClosureResult subset_check(const ClosureFamily& family, std::size_t grid) {
    ClosureResult out;
    out.rule = SupportRule::kSubset;
    out.grid = grid;
    const auto states = family.all_states();
    const std::size_t n = states.size();
    if (n > 20) throw InvalidArgument("subset search supports at most 20 states");
    const std::uint32_t all = (1u << n) - 1u;

    // A pattern is the set of states whose supports contain one ontic point.
    std::vector<std::uint32_t> forbid(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && orthogonal(states[i], states[j])) forbid[i] |= 1u << j;
        }
    }
    const auto valid = [&](std::uint32_t p) {
        if (p == 0) return false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(p >> i & 1u)) continue;
            if (p & forbid[i]) return false;
            if (i >= 2 && !(p & 3u)) return false;
        }
        return true;
    };
    std::vector<std::uint32_t> maximal;
    for (std::uint32_t p = 1; p <= all; ++p) {
        if (!valid(p)) continue;
        ++out.patterns;
        bool is_max = true;
        for (std::size_t i = 0; i < n && is_max; ++i) {
            if (!(p >> i & 1u) && valid(p | (1u << i))) is_max = false;
        }
        if (is_max) maximal.push_back(p);
    }

    // Fewest patterns covering every state; supersets of chosen patterns stay
    // valid, so maximal patterns suffice.
    std::vector<std::uint32_t> chosen, best;
    std::function<bool(std::size_t, std::uint32_t, std::size_t)> search = [&](std::size_t depth, std::uint32_t covered,
                                                                              std::size_t start) {
        if (covered == all) {
            best = chosen;
            return true;
        }
        if (depth == 0) return false;
        // Branch on the lowest uncovered state: some pattern must contain it.
        const int s = std::countr_one(covered);
        for (std::size_t k = start; k < maximal.size(); ++k) {
            if (!(maximal[k] >> s & 1u)) continue;
            chosen.push_back(maximal[k]);
            if (search(depth - 1, covered | maximal[k], 0)) return true;
            chosen.pop_back();
        }
        return false;
    };
    for (std::size_t k = 1; k <= n; ++k) {
        if (search(k, 0, 0)) {
            out.min_points = k;
            break;
        }
    }
    if (!out.min_points) throw InvariantViolation("subset search found no cover");

    if (*out.min_points <= grid) {
        auto space = OnticSpace::indexed(grid);
        for (std::size_t i = 0; i < n; ++i) {
            auto& sup = out.supports[states[i].label()];
            for (std::size_t p = 0; p < best.size(); ++p) {
                if (best[p] >> i & 1u) sup.push_back((*space)[p]);
            }
        }
        return out;
    }
    nlohmann::ordered_json witness = {
        {"rule", "subset"},
        {"grid", grid},
        {"min_points", *out.min_points},
        {"patterns", out.patterns},
        {"reason", "no assignment of non-empty supports fits on the grid"},
    };
    out.certificate = make_certificate(CertificateKind::kSupportClash, 1.0, std::move(witness));
    return out;
}

}  // namespace

const char* to_string(SupportRule rule) { return rule == SupportRule::kMixture ? "mixture" : "subset"; }

SupportRule support_rule_from_string(const std::string& name) {
    if (name == "mixture") return SupportRule::kMixture;
    if (name == "subset") return SupportRule::kSubset;
    throw InvalidArgument("unknown support rule '" + name + "' (expected mixture or subset)");
}

ClosureFamily::ClosureFamily(QuantumState first, QuantumState second, std::vector<DerivedState> derived)
    : first_(std::move(first)), second_(std::move(second)), derived_(std::move(derived)) {
    if (!orthogonal(first_, second_)) throw InvalidArgument("closure base pair must be orthogonal");
    std::set<std::string> labels;
    for (const auto* s : {&first_, &second_}) {
        if (s->label().empty() || !labels.insert(s->label()).second) {
            throw InvalidArgument("closure states need distinct non-empty labels");
        }
    }
    const std::array<QuantumState, 2> base{first_, second_};
    for (const auto& d : derived_) {
        if (d.state.label().empty() || !labels.insert(d.state.label()).second) {
            throw InvalidArgument("closure states need distinct non-empty labels");
        }
        if (!phase_equivalent(superpose(d.coeffs, base), d.state, tol::kNorm)) {
            throw InvalidArgument("derived state '" + d.state.label() + "' is not the stated superposition");
        }
    }
}

ClosureFamily ClosureFamily::mub(bool with_y) {
    const auto f = mub_family();
    const double r = std::numbers::sqrt2 / 2.0;
    const Complex i{0.0, 1.0};
    std::vector<DerivedState> d{{{r, r}, f[2]}, {{r, -r}, f[3]}};
    if (with_y) {
        d.push_back({{r, i * r}, f[4]});
        d.push_back({{r, -i * r}, f[5]});
    }
    return ClosureFamily(f[0], f[1], std::move(d));
}

ClosureFamily ClosureFamily::from_coefficients(QuantumState first, QuantumState second,
                                               const std::vector<std::array<Complex, 2>>& coeffs) {
    const std::array<QuantumState, 2> base{first, second};
    std::vector<DerivedState> d;
    for (std::size_t k = 0; k < coeffs.size(); ++k) d.push_back({coeffs[k], superpose(coeffs[k], base, "d" + std::to_string(k))});
    return ClosureFamily(std::move(first), std::move(second), std::move(d));
}

std::vector<QuantumState> ClosureFamily::all_states() const {
    std::vector<QuantumState> out{first_, second_};
    for (const auto& d : derived_) out.push_back(d.state);
    return out;
}

ClosureResult superposition_closure_check(const ClosureFamily& family, SupportRule rule, std::size_t grid) {
    if (grid < 2) throw InvalidArgument("closure check needs a grid of at least 2 points");
    return rule == SupportRule::kMixture ? mixture_check(family, grid) : subset_check(family, grid);
}

LeakageResult leakage_probability(double q, const QuantumState& psi1, const QuantumState& psi2,
                                  const QuantumState& psi1_perp) {
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("overlap q must lie in [0, 1]");
    if (psi1.dim() != psi2.dim()) throw DimensionMismatch("leakage: psi1 and psi2 differ in dimension");
    if (!orthogonal(psi1_perp, psi1)) throw InvalidArgument("psi1_perp must be orthogonal to psi1");
    LeakageResult out;
    out.amplitude = inner_product(psi1_perp, psi2);
    out.probability = q * std::norm(out.amplitude) / 2.0;
    out.quantum_value = 0.0;
    if (out.probability > out.quantum_value) {
        nlohmann::ordered_json witness = {
            {"q", q},
            {"amplitude_abs2", std::norm(out.amplitude)},
            {"model_probability", out.probability},
            {"quantum_probability", out.quantum_value},
            {"event", "ontic state in the overlap region answers psi1_perp for a psi1 preparation"},
        };
        out.certificate = make_certificate(CertificateKind::kProbabilityViolation, out.probability - out.quantum_value,
                                           std::move(witness));
    }
    return out;
}

SternGerlachResult stern_gerlach_check(double phase) {
    const auto family = mub_family();
    const auto& plus_x = family[2];
    const auto& minus_x = family[3];
    auto output = apply_relative_phase(plus_x, z_basis(), 1, phase);

    SternGerlachResult out{phase, plus_x, output, std::abs(inner_product(minus_x, output)),
                           phase_equivalent(output, minus_x, tol::kNorm), 0.0, {}, std::nullopt};

    std::vector<QuantumState> states(family.begin(), family.end());
    std::string out_label;
    for (const auto& s : family) {
        if (phase_equivalent(output, s, tol::kNorm)) out_label = s.label();
    }
    if (out_label.empty()) {
        out_label = "U(+x)";
        states.push_back(output.with_label(out_label));
    }
    const std::vector<Basis> bases{z_basis(), x_basis(), y_basis()};
    const auto model = make_psi_complete_model(states, bases);
    std::map<std::string, QuantumState> table;
    for (const auto& s : states) table.emplace(s.label(), s);
    out.born = born_reproduction_check(model, table, tol::kNorm);
    out.support_overlap = classical_overlap(model.preparation(plus_x.label()), model.preparation(out_label));
    out.output = output.with_label(out_label);

    if (orthogonal(plus_x, output)) {
        const double transferred = 1.0 - out.support_overlap;
        nlohmann::ordered_json witness = {
            {"phase", phase},
            {"input", plus_x.label()},
            {"output", out_label},
            {"overlap_with_minus_x", out.overlap_with_minus_x},
            {"born_reproduction_passed", out.born.passed},
            {"support_overlap", out.support_overlap},
            {"transferred_mass", transferred},
            {"premise", "orthogonal input and output need disjoint supports, yet no measurement intervenes"},
        };
        out.certificate = make_certificate(CertificateKind::kSupportClash, transferred, std::move(witness));
    }
    return out;
}

std::vector<Complex> gaussian_orbital(const Grid& grid, double centre, double sigma) {
    if (!(sigma > 0.0)) throw InvalidArgument("gaussian width must be positive");
    std::vector<Complex> f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = grid[i] - centre;
        f[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    }
    return grid_normalize(grid, f);
}

FermionResult fermion_distribution_check(const FermionOptions& options) {
    if (options.grid < 8) throw InvalidArgument("fermion check needs a grid of at least 8 points");
    const auto grid = Grid::uniform(options.lo, options.hi, options.grid);
    const auto psi1 = gaussian_orbital(grid, -options.separation / 2.0, options.sigma);
    const auto psi2 = gaussian_orbital(grid, options.separation / 2.0, options.sigma);

    FermionResult out{options, symmetrize(psi1, psi2, grid), antisymmetrize(psi1, psi2, grid), 0.0, 0.0, false,
                      std::nullopt};
    out.symmetric_diagonal_mass = out.symmetric.diagonal_mass();
    out.antisymmetric_max_diagonal = out.antisymmetric.max_abs_diagonal();

    const auto s_swap = symmetrize(psi2, psi1, grid);
    const auto a_swap = antisymmetrize(psi2, psi1, grid);
    bool exact = true;
    for (std::size_t k = 0; k < out.symmetric.values().size(); ++k) {
        exact = exact && s_swap.values()[k] == out.symmetric.values()[k] &&
                a_swap.values()[k] == -out.antisymmetric.values()[k];
    }
    out.exchange_exact = exact;

    if (out.antisymmetric_max_diagonal != 0.0) throw InvariantViolation("antisymmetric diagonal is not exactly zero");
    if (out.symmetric_diagonal_mass > 0.0) {
        nlohmann::ordered_json witness = {
            {"grid", options.grid},
            {"domain", {options.lo, options.hi}},
            {"separation", options.separation},
            {"sigma", options.sigma},
            {"symmetric_diagonal_mass", out.symmetric_diagonal_mass},
            {"antisymmetric_max_diagonal", out.antisymmetric_max_diagonal},
            {"exchange_exact", exact},
            {"premise", "mu(Psi_e) = mu(-Psi_e), so one combination of mu(Psi_d) and mu(Psi_e) must yield both "
                        "Psi_s and Psi_a statistics on the coincident cells"},
        };
        out.certificate =
            make_certificate(CertificateKind::kProbabilityViolation, out.symmetric_diagonal_mass, std::move(witness));
    }
    return out;
}

}  // namespace pbrlab
