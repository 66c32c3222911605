#include "pbrlab/hilbert.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pbrlab/errors.hpp"
#include "test_util.hpp"

using namespace pbrlab;
using pbrlab::test_support::random_orthogonal_to;
using pbrlab::test_support::random_phase;
using pbrlab::test_support::random_state;
using pbrlab::test_support::scaled;
using pbrlab::test_support::shared_rng;

namespace {
const double kR = std::numbers::sqrt2 / 2.0;
const Complex kI{0.0, 1.0};

void expect_amplitudes(const QuantumState& s, std::vector<Complex> expected, double tol = 1e-12) {
    ASSERT_EQ(s.dim(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_NEAR(s[i].real(), expected[i].real(), tol) << "index " << i;
        EXPECT_NEAR(s[i].imag(), expected[i].imag(), tol) << "index " << i;
    }
}
}  // namespace

TEST(QuantumState, rejects_unnormalized_and_non_finite) {
    EXPECT_THROW(QuantumState({1.0, 1.0}), NotNormalized);
    EXPECT_THROW(QuantumState({Complex{NAN, 0.0}, 0.0}), InvalidArgument);
    EXPECT_THROW(QuantumState::normalized({0.0, 0.0}), InvalidArgument);
    EXPECT_NO_THROW(QuantumState::normalized({3.0, 4.0}));
}

TEST(InnerProduct, superposition_pair_is_orthogonal) {
    auto& rng = shared_rng();
    const auto psi1 = random_state(3, rng);
    const auto psi2 = random_orthogonal_to(psi1, rng);
    const std::vector<Complex> plus{kR, kR};
    const std::vector<Complex> minus{kR, -kR};
    const std::vector<QuantumState> pair{psi1, psi2};
    const auto sp = superpose(plus, pair);
    const auto sm = superpose(minus, pair);
    EXPECT_LT(std::abs(inner_product(sm, sp)), 1e-12);
    EXPECT_NEAR(inner_product(psi1, psi1).real(), 1.0, 1e-12);
}

TEST(InnerProduct, phi2_against_00_is_one_half) {
    // phi2 = (|0>|-> + |1>|+>)/sqrt2 expands to (1/2)(1,-1,1,1).
    const QuantumState phi2({0.5, -0.5, 0.5, 0.5});
    const auto zz = tensor(states::zero(), states::zero());
    const Complex ip = inner_product(phi2, zz);
    EXPECT_NEAR(ip.real(), 0.5, 1e-12);
    EXPECT_NEAR(ip.imag(), 0.0, 1e-12);
    EXPECT_NEAR(born_probability(zz, phi2), 0.25, 1e-12);
}

TEST(InnerProduct, conjugate_symmetry_and_dimension_check) {
    auto& rng = shared_rng();
    const auto a = random_state(4, rng);
    const auto b = random_state(4, rng);
    const Complex ab = inner_product(a, b);
    const Complex ba = inner_product(b, a);
    EXPECT_NEAR(ab.real(), ba.real(), 1e-15);
    EXPECT_NEAR(ab.imag(), -ba.imag(), 1e-15);
    EXPECT_THROW(inner_product(a, random_state(2, rng)), DimensionMismatch);
}

TEST(Superpose, examples) {
    const std::vector<QuantumState> zo{states::zero(), states::one()};
    const std::vector<Complex> c{kR, kR};
    EXPECT_TRUE(phase_equivalent(superpose(c, zo), states::plus(), 1e-12));

    auto& rng = shared_rng();
    const auto psi = random_state(3, rng);
    const std::vector<Complex> one{1.0};
    const std::vector<QuantumState> single{psi};
    expect_amplitudes(superpose(one, single), {psi[0], psi[1], psi[2]});

    EXPECT_THROW(superpose(std::vector<Complex>{0.0, 0.0}, zo), InvalidArgument);
    const std::vector<QuantumState> mixed{states::zero(), random_state(3, rng)};
    EXPECT_THROW(superpose(c, mixed), DimensionMismatch);
}

TEST(Superpose, invariant_under_common_rescaling) {
    auto& rng = shared_rng();
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<QuantumState> s{random_state(3, rng), random_state(3, rng)};
        const std::vector<Complex> c{Complex{0.3, -1.2}, Complex{0.7, 0.1}};
        const Complex z = 2.5 * random_phase(rng);
        const std::vector<Complex> cz{c[0] * z, c[1] * z};
        EXPECT_TRUE(phase_equivalent(superpose(c, s), superpose(cz, s), 1e-12));
    }
}

TEST(Superpose, closure_round_trip) {
    auto& rng = shared_rng();
    for (int trial = 0; trial < 100; ++trial) {
        const auto p1 = random_state(4, rng);
        const auto p2 = random_orthogonal_to(p1, rng);
        const std::vector<QuantumState> base{p1, p2};
        const std::vector<QuantumState> pm{superpose(std::vector<Complex>{kR, kR}, base),
                                           superpose(std::vector<Complex>{kR, -kR}, base)};
        const auto back1 = superpose(std::vector<Complex>{kR, kR}, pm);
        const auto back2 = superpose(std::vector<Complex>{kR, -kR}, pm);
        for (std::size_t i = 0; i < 4; ++i) {
            EXPECT_LT(std::abs(back1[i] - p1[i]), 1e-12);
            EXPECT_LT(std::abs(back2[i] - p2[i]), 1e-12);
        }
        EXPECT_LT(std::abs(inner_product(pm[0], pm[1])), 1e-12);
    }
}

TEST(Tensor, examples_and_layout) {
    expect_amplitudes(tensor(states::zero(), states::zero()), {1.0, 0.0, 0.0, 0.0});
    expect_amplitudes(tensor(states::zero(), states::plus()), {kR, kR, 0.0, 0.0});
    expect_amplitudes(tensor(states::one(), states::plus()), {0.0, 0.0, kR, kR});
    auto& rng = shared_rng();
    const auto t = tensor(random_state(2, rng), random_state(3, rng));
    EXPECT_EQ(t.dim(), 6u);
    double n2 = 0.0;
    for (const auto& a : t.amplitudes()) n2 += std::norm(a);
    EXPECT_NEAR(n2, 1.0, 1e-12);
}

TEST(BornProbability, examples) {
    const auto f = mub_family();
    EXPECT_NEAR(born_probability(f[0], f[0]), 1.0, 1e-12);
    EXPECT_NEAR(born_probability(f[0], f[1]), 0.0, 1e-12);
    EXPECT_THROW(born_probability(f[0], tensor(f[0], f[0])), DimensionMismatch);
}

TEST(BornProbability, sums_to_one_over_any_basis) {
    auto& rng = shared_rng();
    for (int trial = 0; trial < 50; ++trial) {
        // Random basis by Gram-Schmidt.
        std::vector<QuantumState> vecs;
        while (vecs.size() < 4) {
            auto r = random_state(4, rng);
            std::vector<Complex> a(r.amplitudes().begin(), r.amplitudes().end());
            for (const auto& v : vecs) {
                const Complex c = inner_product(v, r);
                for (std::size_t i = 0; i < 4; ++i) a[i] -= c * v[i];
            }
            vecs.push_back(QuantumState::normalized(std::move(a)));
        }
        const Basis basis(vecs);
        const auto psi = random_state(4, rng);
        double total = 0.0;
        for (double p : born_distribution(psi, basis)) total += p;
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(BornProbability, cauchy_schwarz) {
    auto& rng = shared_rng();
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_state(3, rng);
        const auto b = random_state(3, rng);
        EXPECT_LE(std::abs(inner_product(a, b)), 1.0 + 1e-12);
    }
}

TEST(PhaseEquivalent, global_phase_classes) {
    auto& rng = shared_rng();
    const auto psi = random_state(3, rng);
    EXPECT_TRUE(phase_equivalent(psi, scaled(psi, kI), 1e-12));
    EXPECT_TRUE(phase_equivalent(psi, scaled(psi, -1.0), 1e-12));
    EXPECT_TRUE(phase_equivalent(psi, psi, 1e-12));
    const auto f = mub_family();
    EXPECT_FALSE(phase_equivalent(f[2], f[3], 1e-12));
    EXPECT_FALSE(phase_equivalent(f[2], f[4], 1e-6));
}

TEST(RelativePhase, flips_plus_x_to_minus_x) {
    const auto f = mub_family();
    const auto zb = z_basis();
    const auto out = apply_relative_phase(f[2], zb, 1, std::numbers::pi);
    EXPECT_TRUE(phase_equivalent(out, f[3], 1e-12));
    EXPECT_NEAR(std::abs(inner_product(f[3], out)), 1.0, 1e-12);

    const auto quarter = apply_relative_phase(f[2], zb, 1, std::numbers::pi / 2);
    EXPECT_TRUE(phase_equivalent(quarter, QuantumState({kR, kI * kR}), 1e-12));
    EXPECT_TRUE(phase_equivalent(quarter, f[4], 1e-12));

    EXPECT_THROW(apply_relative_phase(f[2], zb, 2, 0.0), InvalidArgument);
}

TEST(RelativePhase, identity_norm_and_additivity) {
    auto& rng = shared_rng();
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const auto xb = x_basis();
    for (int trial = 0; trial < 100; ++trial) {
        const auto psi = random_state(2, rng);
        const auto same = apply_relative_phase(psi, xb, 0, 0.0);
        for (std::size_t i = 0; i < 2; ++i) EXPECT_LT(std::abs(same[i] - psi[i]), 1e-12);

        const double a = u(rng);
        const double b = u(rng);
        const auto ab = apply_relative_phase(apply_relative_phase(psi, xb, 1, a), xb, 1, b);
        const auto direct = apply_relative_phase(psi, xb, 1, a + b);
        double n2 = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            EXPECT_LT(std::abs(ab[i] - direct[i]), 1e-12);
            n2 += std::norm(direct[i]);
        }
        EXPECT_NEAR(n2, 1.0, 1e-12);
    }
}

TEST(MubFamily, pairs_orthonormal_and_unbiased) {
    const auto f = mub_family();
    EXPECT_LT(std::abs(inner_product(f[2], f[3])), 1e-12);
    EXPECT_LT(std::abs(inner_product(f[0], f[1])), 1e-12);
    EXPECT_LT(std::abs(inner_product(f[4], f[5])), 1e-12);
    EXPECT_NEAR(born_probability(f[2], f[0]), 0.5, 1e-12);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            if (i / 2 == j / 2) continue;
            EXPECT_NEAR(born_probability(f[i], f[j]), 0.5, 1e-12) << f[i].label() << " " << f[j].label();
        }
    }
    EXPECT_NO_THROW(z_basis());
    EXPECT_NO_THROW(x_basis());
    EXPECT_NO_THROW(y_basis());
}

TEST(Basis, rejects_non_orthogonal_vectors) {
    EXPECT_THROW(Basis({states::zero(), states::plus()}), InvalidArgument);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Complex> sample(const Grid& g, double (*f)(double)) {
    std::vector<Complex> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g[i]);
    return grid_normalize(g, v);
}

double gauss0(double x) { return std::exp(-x * x / 2.0); }
double gauss1(double x) { return x * std::exp(-x * x / 2.0); }

// Independent trapezoidal oracle for sum_ij |F_ij|^2 w_i w_j on a uniform grid.
double trapezoid_norm2(const TwoParticleWavefunction& f, double lo, double hi) {
    const std::size_t g = f.size();
    const double h = (hi - lo) / static_cast<double>(g - 1);
    auto w = [&](std::size_t i) { return (i == 0 || i + 1 == g) ? h / 2 : h; };
    double s = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < g; ++j) s += std::norm(f(i, j)) * w(i) * w(j);
    }
    return s;
}

}  // namespace

TEST(TwoParticle, antisymmetrized_orthogonal_gaussians) {
    const auto grid = Grid::uniform(-4.0, 4.0, 64);
    const auto p0 = sample(grid, gauss0);
    const auto p1 = sample(grid, gauss1);
    const auto a = antisymmetrize(p0, p1, grid);
    EXPECT_NEAR(trapezoid_norm2(a, -4.0, 4.0), 1.0, 1e-9);
    EXPECT_EQ(a.max_abs_diagonal(), 0.0);
    for (std::size_t i = 0; i < 64; ++i) {
        for (std::size_t j = 0; j < 64; ++j) {
            ASSERT_EQ(a(i, j), -a(j, i));
        }
    }
}

TEST(TwoParticle, symmetrized_is_exactly_symmetric) {
    const auto grid = Grid::uniform(-4.0, 4.0, 48);
    const auto p0 = sample(grid, gauss0);
    const auto p1 = sample(grid, gauss1);
    const auto s = symmetrize(p0, p1, grid);
    EXPECT_NEAR(s.norm2(), 1.0, 1e-9);
    for (std::size_t i = 0; i < 48; ++i) {
        for (std::size_t j = 0; j < 48; ++j) ASSERT_EQ(s(i, j), s(j, i));
    }
}

TEST(TwoParticle, symmetrize_identical_is_product) {
    const auto grid = Grid::uniform(-4.0, 4.0, 32);
    const auto p0 = sample(grid, gauss0);
    const auto s = symmetrize(p0, p0, grid);
    for (std::size_t i = 0; i < 32; ++i) {
        for (std::size_t j = 0; j < 32; ++j) EXPECT_LT(std::abs(s(i, j) - p0[i] * p0[j]), 1e-9);
    }
}

TEST(TwoParticle, antisymmetrize_identical_is_named_error) {
    const auto grid = Grid::uniform(-4.0, 4.0, 32);
    const auto p0 = sample(grid, gauss0);
    std::vector<Complex> rotated(p0);
    for (auto& v : rotated) v *= Complex{0.0, 1.0};
    EXPECT_THROW(antisymmetrize(p0, p0, grid), DegenerateAntisymmetrization);
    EXPECT_THROW(antisymmetrize(p0, rotated, grid), DegenerateAntisymmetrization);
}

TEST(TwoParticle, rejects_unnormalized_input) {
    const auto grid = Grid::uniform(-4.0, 4.0, 16);
    std::vector<Complex> ones(16, 1.0);
    EXPECT_THROW(symmetrize(ones, ones, grid), NotNormalized);
}
