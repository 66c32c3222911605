#include "pbrlab/ontology.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pbrlab/errors.hpp"
#include "test_util.hpp"

using namespace pbrlab;

namespace {

std::map<std::string, QuantumState> state_table(std::span<const QuantumState> states) {
    std::map<std::string, QuantumState> t;
    for (const auto& s : states) t.emplace(s.label(), s);
    return t;
}

OntologicalModel mub_model() {
    const auto f = mub_family();
    const std::vector<Basis> bases{z_basis(), x_basis(), y_basis()};
    return make_psi_complete_model(f, bases);
}

std::vector<double> random_distribution(std::size_t n, std::mt19937_64& rng, double zero_prob = 0.3) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> w(n);
    double s = 0.0;
    for (auto& x : w) {
        x = u(rng) < zero_prob ? 0.0 : u(rng);
        s += x;
    }
    if (s == 0.0) {
        w[0] = 1.0;
        s = 1.0;
    }
    for (auto& x : w) x /= s;
    return w;
}

}  // namespace

TEST(EpistemicState, validation_and_clamping) {
    auto space = OnticSpace::indexed(3);
    const EpistemicState clamped(space, {0.5, 0.5 + 5e-13, -5e-13});
    EXPECT_EQ(clamped[2], 0.0);
    EXPECT_THROW(EpistemicState(space, {0.5, 0.6, -0.1}), InvalidArgument);
    EXPECT_THROW(EpistemicState(space, {0.5, 0.4, 0.0}), InvalidArgument);
    EXPECT_THROW(EpistemicState(space, {1.0}), DimensionMismatch);
    EXPECT_THROW(OnticSpace({"a", "a"}), InvalidArgument);
}

TEST(ResponseFunction, rows_must_be_stochastic) {
    auto space = OnticSpace::indexed(2);
    EXPECT_NO_THROW(ResponseFunction(space, 2, {1.0, 0.0, 0.25, 0.75}));
    EXPECT_THROW(ResponseFunction(space, 2, {1.0, 0.1, 0.25, 0.75}), InvalidArgument);
    EXPECT_THROW(ResponseFunction(space, 2, {1.5, -0.5, 0.25, 0.75}), InvalidArgument);
    EXPECT_THROW(ResponseFunction(space, 2, {1.0, 0.0}), DimensionMismatch);
}

TEST(PredictedProbability, psi_complete_is_certain_on_eigenstate) {
    const auto model = mub_model();
    EXPECT_NEAR(predicted_probability(model, "+z", "Z", 0), 1.0, 1e-12);
    EXPECT_NEAR(predicted_probability(model, "+z", "Z", 1), 0.0, 1e-12);
    EXPECT_NEAR(predicted_probability(model, "+x", "Z", 0), 0.5, 1e-12);
    EXPECT_THROW(predicted_probability(model, "nope", "Z", 0), UnknownLabel);
    EXPECT_THROW(predicted_probability(model, "+z", "W", 0), UnknownLabel);
}

TEST(PredictedProbability, sums_to_one_over_outcomes) {
    auto& rng = test_support::shared_rng();
    auto space = OnticSpace::indexed(5);
    std::map<std::string, EpistemicState> preps;
    preps.emplace("a", EpistemicState(space, random_distribution(5, rng)));
    preps.emplace("b", EpistemicState(space, random_distribution(5, rng)));
    std::vector<double> table;
    for (int l = 0; l < 5; ++l) {
        auto row = random_distribution(2, rng, 0.0);
        table.insert(table.end(), row.begin(), row.end());
    }
    std::map<std::string, Measurement> meas;
    meas.emplace("Z", Measurement{z_basis(), ResponseFunction(space, 2, table)});
    const OntologicalModel model(space, preps, meas);
    for (const auto& p : {"a", "b"}) {
        double s = 0.0;
        for (double v : predicted_distribution(model, p, "Z")) s += v;
        EXPECT_NEAR(s, 1.0, 1e-9);
    }
}

TEST(BornReproduction, psi_complete_model_passes_exactly) {
    const std::vector<QuantumState> states{states::zero(), states::plus()};
    const std::vector<Basis> bases{z_basis(), x_basis()};
    const auto model = make_psi_complete_model(states, bases);
    const auto report = born_reproduction_check(model, state_table(states), 1e-12);
    EXPECT_LE(report.max_deviation, 1e-12);
    EXPECT_TRUE(report.passed);
    EXPECT_TRUE(report.support_clashes.empty());
}

TEST(BornReproduction, identical_distributions_report_deviation) {
    auto space = OnticSpace::indexed(2);
    std::map<std::string, EpistemicState> preps;
    preps.emplace("+z", EpistemicState::uniform(space));
    preps.emplace("-z", EpistemicState::uniform(space));
    std::map<std::string, Measurement> meas;
    meas.emplace("Z", Measurement{z_basis(), ResponseFunction(space, 2, {1.0, 0.0, 0.0, 1.0})});
    const OntologicalModel model(space, preps, meas);
    const auto f = mub_family();
    const auto report = born_reproduction_check(model, state_table(std::vector<QuantumState>{f[0], f[1]}), 1e-9);
    EXPECT_NEAR(report.max_deviation, 0.5, 1e-12);
    EXPECT_FALSE(report.passed);
    ASSERT_TRUE(report.worst_case.has_value());
    EXPECT_EQ(report.worst_case->measurement, "Z");
    EXPECT_FALSE(report.support_clashes.empty());
}

TEST(BornReproduction, empty_measurement_map_is_vacuous) {
    auto space = OnticSpace::indexed(1);
    std::map<std::string, EpistemicState> preps;
    preps.emplace("0", EpistemicState::point_mass(space, 0));
    const OntologicalModel model(space, preps, {});
    const auto report = born_reproduction_check(model, state_table(std::vector<QuantumState>{states::zero()}), 1e-12);
    EXPECT_EQ(report.max_deviation, 0.0);
    EXPECT_TRUE(report.passed);
}

TEST(BornReproduction, missing_state_is_an_error) {
    const auto model = mub_model();
    std::map<std::string, QuantumState> partial;
    partial.emplace("+z", mub_family()[0]);
    EXPECT_THROW(born_reproduction_check(model, partial, 1e-9), UnknownLabel);
}

TEST(OrthogonalityLemma, overlapping_orthogonal_preparations_fail) {
    // +z and -z share lambda_1 with weight 0.3. Whatever the response on
    // lambda_1, one of the two Born statistics is off by at least 0.15.
    auto& rng = test_support::shared_rng();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto space = OnticSpace::indexed(3);
    const auto f = mub_family();
    for (int trial = 0; trial < 50; ++trial) {
        const double r = u(rng);
        std::map<std::string, EpistemicState> preps;
        preps.emplace("+z", EpistemicState(space, {0.7, 0.3, 0.0}));
        preps.emplace("-z", EpistemicState(space, {0.0, 0.3, 0.7}));
        std::map<std::string, Measurement> meas;
        meas.emplace("Z", Measurement{z_basis(), ResponseFunction(space, 2, {1.0, 0.0, r, 1.0 - r, 0.0, 1.0})});
        const OntologicalModel model(space, preps, meas);
        const auto report = born_reproduction_check(model, state_table(std::vector<QuantumState>{f[0], f[1]}), 1e-9);
        EXPECT_FALSE(report.passed);
        EXPECT_GE(report.max_deviation, 0.15 - 1e-12);
        ASSERT_EQ(report.support_clashes.size(), 1u);
        EXPECT_EQ(report.support_clashes[0].shared, std::vector<std::string>{"l1"});
    }
}

TEST(OrthogonalityLemma, passing_models_never_clash) {
    const auto model = mub_model();
    const auto f = mub_family();
    const auto report = born_reproduction_check(model, state_table(f), 1e-9);
    EXPECT_TRUE(report.passed);
    EXPECT_TRUE(orthogonal_support_clashes(model, state_table(f), 1e-9).empty());
}

TEST(ClassicalOverlap, examples) {
    auto space = OnticSpace::indexed(3);
    const EpistemicState a(space, {0.5, 0.5, 0.0});
    const EpistemicState b(space, {0.0, 0.5, 0.5});
    EXPECT_NEAR(classical_overlap(a, a), 1.0, 1e-12);
    EXPECT_NEAR(classical_overlap(a, b), 0.5, 1e-12);
    EXPECT_EQ(classical_overlap(EpistemicState::point_mass(space, 0), EpistemicState::point_mass(space, 2)), 0.0);
    EXPECT_THROW(classical_overlap(a, EpistemicState::uniform(OnticSpace::indexed(2))), InvalidArgument);
}

TEST(ClassicalOverlap, symmetric_bounded_and_one_iff_equal) {
    auto& rng = test_support::shared_rng();
    auto space = OnticSpace::indexed(6);
    for (int trial = 0; trial < 200; ++trial) {
        const EpistemicState a(space, random_distribution(6, rng));
        const EpistemicState b(space, random_distribution(6, rng));
        const double q = classical_overlap(a, b);
        EXPECT_EQ(q, classical_overlap(b, a));
        EXPECT_GE(q, 0.0);
        EXPECT_LE(q, 1.0);
        double l1 = 0.0;
        for (std::size_t i = 0; i < 6; ++i) l1 += std::abs(a[i] - b[i]);
        // q = 1 - TV distance.
        EXPECT_NEAR(q, 1.0 - l1 / 2.0, 1e-12);
        EXPECT_EQ(std::abs(q - 1.0) <= 1e-9, l1 / 2.0 <= 1e-9);
    }
}

TEST(ProductDistribution, point_masses_and_uniform) {
    auto s2 = OnticSpace::indexed(2, "a");
    const auto d = product_distribution(EpistemicState::point_mass(s2, 1), EpistemicState::point_mass(s2, 0));
    EXPECT_EQ(support(d, 1e-12), std::vector<std::string>{"(a1,a0)"});
    const auto u = product_distribution(EpistemicState::uniform(s2), EpistemicState::uniform(s2));
    ASSERT_EQ(u.size(), 4u);
    for (double w : u.weights()) EXPECT_NEAR(w, 0.25, 1e-15);
}

TEST(ProductDistribution, overlap_of_products_brute_force) {
    auto s3 = OnticSpace::indexed(3);
    const EpistemicState mu1(s3, {0.5, 0.5, 0.0});
    const EpistemicState mu2(s3, {0.0, 0.5, 0.5});
    const auto p1 = product_distribution(mu1, mu1);
    const auto p2 = product_distribution(mu2, mu2);
    // Oracle: explicit min-sum over the 9 pairs.
    double brute = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) brute += std::min(mu1[i] * mu1[j], mu2[i] * mu2[j]);
    }
    EXPECT_NEAR(brute, 0.25, 1e-15);
    EXPECT_NEAR(classical_overlap(p1, p2), brute, 1e-12);
}

TEST(ProductDistribution, overlap_factorizes_on_block_families_and_bounds_otherwise) {
    auto& rng = test_support::shared_rng();
    std::uniform_int_distribution<int> cut(0, 5);
    auto space = OnticSpace::indexed(6);
    auto block = [&](int lo, int hi) {
        std::vector<double> w(6, 0.0);
        for (int i = lo; i < hi; ++i) w[static_cast<std::size_t>(i)] = 1.0 / (hi - lo);
        return EpistemicState(space, w);
    };
    for (int trial = 0; trial < 100; ++trial) {
        // Equal-weight blocks of the same length: pointwise minima factorize.
        const int len = 1 + cut(rng) % 3;
        const int s1 = cut(rng) % (7 - len), s2 = cut(rng) % (7 - len);
        const int t1 = cut(rng) % (7 - len), t2 = cut(rng) % (7 - len);
        const auto m1 = block(s1, s1 + len), m2 = block(s2, s2 + len);
        const auto n1 = block(t1, t1 + len), n2 = block(t2, t2 + len);
        EXPECT_NEAR(classical_overlap(product_distribution(m1, n1), product_distribution(m2, n2)),
                    classical_overlap(m1, m2) * classical_overlap(n1, n2), 1e-9);

        const EpistemicState a1(space, random_distribution(6, rng)), a2(space, random_distribution(6, rng));
        const EpistemicState b1(space, random_distribution(6, rng)), b2(space, random_distribution(6, rng));
        EXPECT_GE(classical_overlap(product_distribution(a1, b1), product_distribution(a2, b2)),
                  classical_overlap(a1, a2) * classical_overlap(b1, b2) - 1e-12);
    }
}

TEST(Support, thresholds) {
    auto s1 = OnticSpace::indexed(1);
    EXPECT_EQ(support(EpistemicState::point_mass(s1, 0), 1e-12), std::vector<std::string>{"l0"});
    EXPECT_TRUE(support(EpistemicState::uniform(OnticSpace::indexed(4)), 0.3).empty());
    const EpistemicState mu(OnticSpace::indexed(3), {0.7, 0.3, 0.0});
    EXPECT_EQ(support(mu, 0.1), (std::vector<std::string>{"l0", "l1"}));
    EXPECT_THROW(support(mu, -1.0), InvalidArgument);
}

TEST(SampleRun, deterministic_response_is_exact) {
    const auto model = mub_model();
    const auto r = sample_run(model, "+z", "Z", 10000, 1);
    EXPECT_EQ(r.frequencies[0], 1.0);
    EXPECT_EQ(r.counts[1], 0u);
}

TEST(SampleRun, binomial_envelope) {
    const auto model = mub_model();
    const auto r = sample_run(model, "+x", "Z", 100000, 42);
    const double sigma = std::sqrt(0.25 / 1e5);
    EXPECT_NEAR(r.frequencies[0], 0.5, 4 * sigma);
    EXPECT_NEAR(r.frequencies[1], 0.5, 4 * sigma);
}

TEST(SampleRun, single_trial_and_determinism) {
    const auto model = mub_model();
    const auto one = sample_run(model, "+y", "X", 1, 9);
    EXPECT_EQ(one.counts[0] + one.counts[1], 1u);
    const auto a = sample_run(model, "+y", "X", 5000, 123);
    const auto b = sample_run(model, "+y", "X", 5000, 123);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_THROW(sample_run(model, "+y", "X", 0, 1), InvalidArgument);
    EXPECT_THROW(sample_run(model, "??", "X", 10, 1), UnknownLabel);
}

TEST(SampleRun, converges_to_prediction_for_stochastic_models) {
    auto& rng = test_support::shared_rng();
    auto space = OnticSpace::indexed(4);
    std::map<std::string, EpistemicState> preps;
    preps.emplace("p", EpistemicState(space, random_distribution(4, rng, 0.0)));
    std::vector<double> table;
    for (int l = 0; l < 4; ++l) {
        auto row = random_distribution(3, rng, 0.2);
        table.insert(table.end(), row.begin(), row.end());
    }
    const Basis b3 = Basis::computational(3, "C3");
    std::map<std::string, Measurement> meas;
    meas.emplace("C3", Measurement{b3, ResponseFunction(space, 3, table)});
    const OntologicalModel model(space, preps, meas);
    const auto r = sample_run(model, "p", "C3", 100000, 77);
    for (std::size_t k = 0; k < 3; ++k) {
        const double p = predicted_probability(model, "p", "C3", k);
        EXPECT_NEAR(r.frequencies[k], p, 4 * std::sqrt(p * (1 - p) / 1e5) + 1e-12);
    }
}

TEST(SampleRun, compare_sample_matches_sample_run) {
    const auto model = mub_model();
    const auto c = compare_sample(model, "+y", "X", 100000, 3);
    const auto raw = sample_run(model, "+y", "X", 100000, 3);
    EXPECT_EQ(c.sample.counts, raw.counts);
    EXPECT_EQ(c.predicted, predicted_distribution(model, "+y", "X"));
    EXPECT_NEAR(c.sigma[0], std::sqrt(0.25 / 100000.0), 1e-15);
    EXPECT_TRUE(c.within_envelope);
    for (double z : c.deviation_sigmas) EXPECT_LE(z, 4.0);

    const auto exact = compare_sample(model, "+z", "Z", 1000, 1);
    EXPECT_EQ(exact.sigma[0], 0.0);
    EXPECT_EQ(exact.deviation_sigmas[0], 0.0);
    EXPECT_TRUE(exact.within_envelope);
}

TEST(SampleRun, compare_sample_edge_cases) {
    auto space = OnticSpace::indexed(2);
    std::map<std::string, EpistemicState> preps{{"a", EpistemicState::point_mass(space, 0)}};
    std::map<std::string, Measurement> meas;
    meas.emplace("Z", Measurement{z_basis(), ResponseFunction(space, 2, {1.0, 0.0, 0.0, 1.0})});
    const OntologicalModel model(space, preps, meas);
    EXPECT_TRUE(compare_sample(model, "a", "Z", 100, 1).within_envelope);
    EXPECT_THROW(compare_sample(model, "a", "Z", 100, 1, 0.0), InvalidArgument);
    EXPECT_THROW(binomial_sigma(0.5, 0), InvalidArgument);
    EXPECT_EQ(binomial_sigma(1.0, 10), 0.0);
}
