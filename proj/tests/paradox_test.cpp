#include "pbrlab/paradox.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pbrlab/errors.hpp"
#include "test_util.hpp"

using namespace pbrlab;
using pbrlab::test_support::random_orthogonal_to;
using pbrlab::test_support::random_phase;
using pbrlab::test_support::random_state;
using pbrlab::test_support::shared_rng;

namespace {

// Numpy trapezoid sum with the same grid, orbitals and normalization.
constexpr double kSymmetricDiagonalMass = 0.02415496408483441;

QuantumState times(const QuantumState& s, Complex c) {
    std::vector<Complex> a(s.amplitudes().begin(), s.amplitudes().end());
    for (auto& x : a) x *= c;
    return QuantumState(std::move(a), s.label());
}

}  // namespace

TEST(ClosureFamily, validation) {
    EXPECT_NO_THROW(ClosureFamily::mub());
    const auto f = mub_family();
    EXPECT_THROW(ClosureFamily(f[0], f[2], {}), InvalidArgument);
    const double r = std::numbers::sqrt2 / 2.0;
    EXPECT_THROW(ClosureFamily(f[0], f[1], {{{r, r}, f[3]}}), InvalidArgument);
    EXPECT_NO_THROW(ClosureFamily(f[0], f[1], {{{r, -r}, times(f[3], Complex(0.0, 1.0))}}));
    EXPECT_THROW(ClosureFamily(f[0], f[1], {{{r, r}, f[2].with_label("+z")}}), InvalidArgument);
}

TEST(Closure, superpositions_of_orthogonal_pairs_are_orthogonal) {
    auto& rng = shared_rng();
    const double r = std::numbers::sqrt2 / 2.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = random_state(2 + trial % 3, rng);
        const auto q = random_orthogonal_to(p, rng);
        const auto fam = ClosureFamily::from_coefficients(p.with_label("p"), q.with_label("q"), {{r, r}, {r, -r}});
        EXPECT_LE(std::abs(inner_product(fam.derived()[0].state, fam.derived()[1].state)), 1e-12);
    }
}

TEST(Closure, mixture_rule_clashes_with_magnitude_one) {
    for (bool with_y : {false, true}) {
        const auto r = superposition_closure_check(ClosureFamily::mub(with_y), SupportRule::kMixture, 8);
        ASSERT_FALSE(r.satisfiable());
        EXPECT_EQ(r.certificate->kind, CertificateKind::kSupportClash);
        EXPECT_NEAR(r.certificate->magnitude, 1.0, 1e-12);
        EXPECT_EQ(r.orthogonal_pairs.size(), with_y ? 3u : 2u);
        const double cross = classical_overlap(r.distributions.at("+x"), r.distributions.at("-x"));
        EXPECT_NEAR(r.certificate->magnitude, cross, 1e-12);
        EXPECT_NEAR(classical_overlap(r.distributions.at("+z"), r.distributions.at("-z")), 0.0, 1e-15);
    }
}

TEST(Closure, mixture_without_orthogonal_derived_pair_is_satisfiable) {
    const auto f = mub_family();
    const double r = std::numbers::sqrt2 / 2.0;
    const ClosureFamily fam(f[0], f[1], {{{r, r}, f[2]}});
    const auto res = superposition_closure_check(fam, SupportRule::kMixture, 4);
    EXPECT_TRUE(res.satisfiable());
    EXPECT_EQ(res.orthogonal_pairs.size(), 1u);
}

TEST(Closure, mixture_uses_born_weights) {
    const auto f = mub_family();
    const auto fam = ClosureFamily::from_coefficients(f[0], f[1], {{0.6, Complex(0.0, 0.8)}});
    const auto res = superposition_closure_check(fam, SupportRule::kMixture, 4);
    const auto& mu = res.distributions.at("d0");
    EXPECT_NEAR(mu[0] + mu[1], 0.36, 1e-12);
    EXPECT_NEAR(mu[2] + mu[3], 0.64, 1e-12);
}

TEST(Closure, subset_rule_single_derived_state_needs_two_blocks) {
    const auto f = mub_family();
    const double r = std::numbers::sqrt2 / 2.0;
    const ClosureFamily fam(f[0], f[1], {{{r, r}, f[2]}});
    const auto res = superposition_closure_check(fam, SupportRule::kSubset, 4);
    ASSERT_TRUE(res.satisfiable());
    EXPECT_EQ(*res.min_points, 2u);
    EXPECT_EQ(res.supports.size(), 3u);
}

namespace {

// Exhaustive oracle: every assignment of one membership pattern (a subset of
// states) per point, over all 2^(n*L) choices.
bool subset_assignment_exists(const std::vector<QuantumState>& s, std::size_t L) {
    const std::size_t n = s.size();
    const std::uint64_t total = 1ull << (n * L);
    for (std::uint64_t code = 0; code < total; ++code) {
        bool ok = true;
        std::vector<std::uint32_t> supp(n, 0);
        for (std::size_t p = 0; p < L; ++p) {
            for (std::size_t i = 0; i < n; ++i) {
                if (code >> (p * n + i) & 1) supp[i] |= 1u << p;
            }
        }
        for (std::size_t i = 0; i < n && ok; ++i) {
            if (supp[i] == 0) ok = false;
            if (i >= 2 && (supp[i] & ~(supp[0] | supp[1]))) ok = false;
            for (std::size_t j = i + 1; j < n && ok; ++j) {
                if (std::abs(inner_product(s[i], s[j])) <= 1e-12 && (supp[i] & supp[j])) ok = false;
            }
        }
        if (ok) return true;
    }
    return false;
}

}  // namespace

TEST(Closure, subset_rule_matches_exhaustive_enumeration) {
    const auto fam = ClosureFamily::mub(false);
    for (std::size_t L : {2u, 3u}) {
        const auto res = superposition_closure_check(fam, SupportRule::kSubset, L);
        EXPECT_EQ(res.satisfiable(), subset_assignment_exists(fam.all_states(), L)) << L;
    }
    const auto full = superposition_closure_check(ClosureFamily::mub(true), SupportRule::kSubset, 8);
    EXPECT_TRUE(full.satisfiable());
    EXPECT_EQ(*full.min_points, 2u);
    EXPECT_TRUE(subset_assignment_exists(ClosureFamily::mub(true).all_states(), 2));
}

TEST(Closure, subset_rule_fits_random_families_on_two_points) {
    // Within a two-dimensional span orthogonality pairs rays off, so one
    // point per base state always suffices.
    auto& rng = shared_rng();
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_state(3, rng).with_label("a");
        const auto b = random_orthogonal_to(a, rng).with_label("b");
        std::vector<std::array<Complex, 2>> coeffs;
        for (int k = 0; k < 3; ++k) {
            const Complex c0{u(rng), u(rng)}, c1{u(rng), u(rng)};
            coeffs.push_back({c0, c1});
            coeffs.push_back({std::conj(c1), -std::conj(c0)});
        }
        const auto fam = ClosureFamily::from_coefficients(a, b, coeffs);
        const auto res = superposition_closure_check(fam, SupportRule::kSubset, 2);
        ASSERT_TRUE(res.satisfiable());
        EXPECT_EQ(*res.min_points, 2u);
        const auto states = fam.all_states();
        for (std::size_t i = 0; i < states.size(); ++i) {
            for (std::size_t j = i + 1; j < states.size(); ++j) {
                if (std::abs(inner_product(states[i], states[j])) > 1e-12) continue;
                for (const auto& l : res.supports.at(states[i].label())) {
                    const auto& other = res.supports.at(states[j].label());
                    EXPECT_EQ(std::count(other.begin(), other.end(), l), 0);
                }
            }
        }
    }
    EXPECT_THROW(superposition_closure_check(ClosureFamily::mub(), SupportRule::kSubset, 1), InvalidArgument);
}

TEST(Leakage, worked_instance) {
    const auto r = leakage_probability(0.2, states::zero(), states::plus(), states::one());
    EXPECT_NEAR(r.probability, 0.05, 1e-15);
    EXPECT_EQ(r.quantum_value, 0.0);
    ASSERT_TRUE(r.certificate.has_value());
    EXPECT_EQ(r.certificate->kind, CertificateKind::kProbabilityViolation);
    EXPECT_NEAR(r.certificate->magnitude, 0.05, 1e-15);
}

TEST(Leakage, degenerate_cases_and_errors) {
    EXPECT_EQ(leakage_probability(0.0, states::zero(), states::plus(), states::one()).probability, 0.0);
    EXPECT_FALSE(leakage_probability(0.0, states::zero(), states::plus(), states::one()).certificate);
    EXPECT_NEAR(leakage_probability(0.7, states::zero(), states::zero(), states::one()).probability, 0.0, 1e-30);
    EXPECT_THROW(leakage_probability(0.2, states::zero(), states::plus(), states::plus()), InvalidArgument);
    EXPECT_THROW(leakage_probability(1.2, states::zero(), states::plus(), states::one()), InvalidArgument);
}

TEST(Leakage, linear_in_q_and_phase_invariant) {
    auto& rng = shared_rng();
    std::uniform_real_distribution<double> uq(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 2 + trial % 3;
        const auto p1 = random_state(d, rng);
        const auto p2 = random_state(d, rng);
        const auto perp = random_orthogonal_to(p1, rng);
        const double q = uq(rng);
        const double base = leakage_probability(1.0, p1, p2, perp).probability;
        const double v = leakage_probability(q, p1, p2, perp).probability;
        EXPECT_NEAR(v, q * base, 1e-14);
        EXPECT_NEAR(v, q * std::norm(inner_product(perp, p2)) / 2.0, 1e-12);
        const double w = leakage_probability(q, times(p1, random_phase(rng)), times(p2, random_phase(rng)),
                                             times(perp, random_phase(rng)))
                             .probability;
        EXPECT_NEAR(v, w, 1e-14);
    }
}

TEST(SternGerlach, pi_phase_maps_plus_x_to_minus_x) {
    const auto r = stern_gerlach_check();
    EXPECT_NEAR(r.overlap_with_minus_x, 1.0, 1e-12);
    EXPECT_TRUE(r.output_is_minus_x);
    EXPECT_EQ(r.output.label(), "-x");
    EXPECT_TRUE(r.born.passed);
    EXPECT_EQ(r.support_overlap, 0.0);
    ASSERT_TRUE(r.certificate.has_value());
    EXPECT_EQ(r.certificate->kind, CertificateKind::kSupportClash);
    EXPECT_NEAR(r.certificate->magnitude, 1.0, 1e-12);
}

TEST(SternGerlach, zero_and_half_pi_controls) {
    const auto id = stern_gerlach_check(0.0);
    EXPECT_NEAR(std::abs(inner_product(mub_family()[2], id.output)), 1.0, 1e-12);
    EXPECT_FALSE(id.certificate);
    const auto quarter = stern_gerlach_check(std::numbers::pi / 2.0);
    EXPECT_TRUE(phase_equivalent(quarter.output, mub_family()[4], 1e-12));
    EXPECT_EQ(quarter.output.label(), "+y");
    EXPECT_FALSE(quarter.certificate);
}

TEST(SternGerlach, pi_phase_flips_the_minus_z_sign_for_random_states) {
    auto& rng = shared_rng();
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_state(2, rng);
        const auto out = apply_relative_phase(s, z_basis(), 1, std::numbers::pi);
        const QuantumState expected({s[0], -s[1]});
        EXPECT_TRUE(phase_equivalent(out, expected, 1e-12));
    }
}

TEST(Fermion, diagonal_and_exchange_properties) {
    const auto r = fermion_distribution_check();
    EXPECT_EQ(r.antisymmetric_max_diagonal, 0.0);
    EXPECT_TRUE(r.exchange_exact);
    EXPECT_NEAR(r.symmetric.norm2(), 1.0, 1e-9);
    EXPECT_NEAR(r.antisymmetric.norm2(), 1.0, 1e-9);
    EXPECT_NEAR(r.symmetric_diagonal_mass, kSymmetricDiagonalMass, 1e-12);
    ASSERT_TRUE(r.certificate.has_value());
    EXPECT_EQ(r.certificate->kind, CertificateKind::kProbabilityViolation);
    EXPECT_EQ(r.certificate->magnitude, r.symmetric_diagonal_mass);
}

TEST(Fermion, rejects_small_grids_and_coincident_orbitals) {
    EXPECT_THROW(fermion_distribution_check({.grid = 4}), InvalidArgument);
    EXPECT_THROW(fermion_distribution_check({.separation = 0.0}), DegenerateAntisymmetrization);
    EXPECT_THROW(fermion_distribution_check({.sigma = 0.0}), InvalidArgument);
}
