#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "onebit/montecarlo.hpp"

using namespace onebit;

namespace {

RunConfig reference(double r = 0.5, std::size_t trials = 20000) {
    RunConfig cfg;
    cfg.params.n = 20;
    cfg.params.num_sensors = 1;
    cfg.params.signal_var = 1.0;
    cfg.params.r = r;
    cfg.params.noise_var = 1e-4;
    cfg.trials = trials;
    cfg.master_seed = 12345;
    return cfg;
}

double band(double q, std::size_t trials) { return 3.0 * std::sqrt(q * (1.0 - q) / static_cast<double>(trials)); }

// 3-sigma band plus one count, for tails so thin that a single hit exceeds
// the normal approximation.
double band_with_count(double q, std::size_t trials) {
    return band(q, trials) + 1.0 / static_cast<double>(trials);
}

}  // namespace

TEST(SeedForTrial, Deterministic) {
    auto a = seed_for_trial(77, Hypothesis::H0, 5);
    auto b = seed_for_trial(77, Hypothesis::H0, 5);
    for (int i = 0; i < 64; ++i) ASSERT_EQ(a(), b());
}

TEST(SeedForTrial, HypothesisSeparatesStreams) {
    auto a = seed_for_trial(77, Hypothesis::H0, 7);
    auto b = seed_for_trial(77, Hypothesis::H1, 7);
    bool differ = false;
    for (int i = 0; i < 4; ++i) differ |= a() != b();
    EXPECT_TRUE(differ);
}

TEST(SeedForTrial, NoCollisionsAcrossBatch) {
    std::set<std::uint64_t> first;
    for (auto h : {Hypothesis::H0, Hypothesis::H1}) {
        for (std::uint64_t t = 0; t < 20000; ++t) first.insert(seed_for_trial(2019, h, t)());
    }
    EXPECT_EQ(first.size(), 40000u);
}

TEST(SeedForTrial, UniformAndNormalMoments) {
    auto rng = seed_for_trial(1, Hypothesis::H0, 0);
    constexpr int kDraws = 400000;
    double u_sum = 0.0, z_sum = 0.0, z_sq = 0.0;
    for (int i = 0; i < kDraws; ++i) {
        const double u = rng.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        u_sum += u;
        const double z = rng.normal();
        z_sum += z;
        z_sq += z * z;
    }
    EXPECT_NEAR(u_sum / kDraws, 0.5, 3.0 * std::sqrt(1.0 / 12.0 / kDraws));
    EXPECT_NEAR(z_sum / kDraws, 0.0, 3.0 / std::sqrt(double(kDraws)));
    EXPECT_NEAR(z_sq / kDraws, 1.0, 3.0 * std::sqrt(2.0 / kDraws));
}

TEST(RunConfig, Validation) {
    auto cfg = reference();
    cfg.trials = 0;
    EXPECT_THROW(validate_config(cfg), InvalidConfig);
    cfg = reference();
    cfg.thresholds = {1.0, 1.0};
    EXPECT_THROW(validate_config(cfg), InvalidConfig);
    cfg.thresholds = {2.0, 1.0};
    EXPECT_THROW(validate_config(cfg), InvalidConfig);
    cfg.thresholds = {1.0, 2.0};
    EXPECT_NO_THROW(validate_config(cfg));
    cfg.params.r = 0.7;
    EXPECT_THROW(validate_config(cfg), InvalidConfig);
}

TEST(EstimateRates, EndpointsAndMonotone) {
    const auto curve = estimate_rates(reference(0.5, 5000));
    ASSERT_EQ(curve.points.size(), 21u);
    EXPECT_EQ(curve.points.front().pfa, 1.0);
    EXPECT_EQ(curve.points.front().pd, 1.0);
    EXPECT_EQ(curve.points.back().pfa, 0.0);
    EXPECT_EQ(curve.points.back().pd, 0.0);
    EXPECT_EQ(curve.trials_used, 5000u);
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        EXPECT_LE(curve.points[i].pfa, curve.points[i - 1].pfa);
        EXPECT_LE(curve.points[i].pd, curve.points[i - 1].pd);
    }
}

TEST(EstimateRates, UncorrelatedSignalStaysOnDiagonal) {
    const auto cfg = reference(0.0);
    for (const auto& pt : estimate_rates(cfg).points) {
        // Both rates estimate the same exact tail from independent samples.
        const double q = exact_h0_pfa(cfg.params, pt.eta, DetectorDirection::GreaterIsH1);
        EXPECT_LE(std::abs(pt.pd - pt.pfa), std::sqrt(2.0) * band(q, cfg.trials) + 1.0 / cfg.trials) << pt.eta;
    }
}

TEST(EstimateRates, FalseAlarmMatchesExactTailAtFourteen) {
    auto cfg = reference();
    cfg.thresholds = {13.5};
    const auto pt = estimate_rates(cfg).points.front();
    constexpr double q = 16664.0 / 524288.0;
    EXPECT_LE(std::abs(pt.pfa - q), band(q, cfg.trials)) << pt.pfa;
}

TEST(EstimateRates, IdenticalForAnyWorkerCount) {
    auto cfg = reference(0.5, 3001);
    cfg.params.num_sensors = 3;
    cfg.workers = 1;
    const auto serial = run_empirical(cfg);
    for (std::size_t w : {2u, 3u, 8u, 0u}) {
        cfg.workers = w;
        const auto parallel = run_empirical(cfg);
        EXPECT_EQ(serial.h0.counts, parallel.h0.counts) << w;
        EXPECT_EQ(serial.h1.counts, parallel.h1.counts) << w;
    }
}

TEST(EstimateRates, ConvergesToExactTailAtLargeTrialCount) {
    const auto cfg = reference(0.5, 200000);
    const auto h0 = simulate_histogram(cfg, Hypothesis::H0);
    for (double eta : sweep_thresholds(cfg.params)) {
        const double q = exact_h0_pfa(cfg.params, eta, DetectorDirection::GreaterIsH1);
        const double emp = static_cast<double>(h0.firing(eta, DetectorDirection::GreaterIsH1)) / 200000.0;
        EXPECT_LE(std::abs(emp - q), band_with_count(q, cfg.trials)) << eta;
    }
}

TEST(Histogram, MomentsAndReduction) {
    StatisticHistogram a;
    a.counts = {1, 2, 1};  // values 0, 1, 1, 2
    EXPECT_EQ(a.total(), 4u);
    EXPECT_DOUBLE_EQ(a.mean(), 1.0);
    EXPECT_DOUBLE_EQ(a.variance(), 2.0 / 3.0);
    EXPECT_EQ(a.firing(0.5, DetectorDirection::GreaterIsH1), 3u);
    EXPECT_EQ(a.firing(0.5, DetectorDirection::LessIsH1), 1u);
    StatisticHistogram b;
    b.counts = {0, 0, 0, 5};
    a += b;
    EXPECT_EQ(a.counts, (std::vector<std::uint64_t>{1, 2, 1, 5}));
}

TEST(CompareTheory, NullColumnsAgreeWithExactTail) {
    const auto cfg = reference();
    const auto cmp = compare_theory(cfg);
    ASSERT_EQ(cmp.rows.size(), 21u);
    double worst_clt = 0.0;
    for (const auto& row : cmp.rows) {
        EXPECT_LE(row.dev_pfa_exact(), band_with_count(row.pfa_exact, cfg.trials)) << row.eta;
        worst_clt = std::max(worst_clt, row.dev_pfa_theory_exact());
        ASSERT_TRUE(row.pd_theory.has_value());
    }
    EXPECT_LE(worst_clt, 0.02);
}

TEST(CompareTheory, PaperLiteralRowsFlaggedNotPatched) {
    const auto cfg = reference();
    const auto empirical = estimate_rates(cfg);
    const auto cmp = compare_theory(cfg, empirical, TheoryMode::PaperLiteral);
    EXPECT_LT(cmp.h1.variance, 0.0);
    for (const auto& row : cmp.rows) {
        EXPECT_TRUE(row.negative_variance());
        EXPECT_FALSE(row.dev_pd_theory().has_value());
    }
}

TEST(CompareTheory, UncorrelatedModesDisagreeOnSignalMean) {
    const auto cfg = reference(0.0, 2000);
    const auto empirical = estimate_rates(cfg);
    const auto paper = compare_theory(cfg, empirical, TheoryMode::PaperLiteral);
    const auto consistent = compare_theory(cfg, empirical, TheoryMode::Consistent);
    EXPECT_DOUBLE_EQ(paper.agreement.p, 0.5);
    EXPECT_DOUBLE_EQ(paper.h1.mean, 19.0);
    EXPECT_DOUBLE_EQ(consistent.h1.mean, 9.5);
    EXPECT_EQ(paper.h1.variance, 0.0);
    EXPECT_TRUE(paper.rows.front().negative_variance());
    EXPECT_FALSE(consistent.rows.front().negative_variance());
}

TEST(PdAtPfa, InterpolatesBetweenOperatingPoints) {
    RocCurve c;
    c.points = {{-0.5, 1.0, 1.0}, {0.5, 0.4, 0.8}, {1.5, 0.0, 0.0}};
    EXPECT_DOUBLE_EQ(pd_at_pfa(c, 0.4), 0.8);
    EXPECT_DOUBLE_EQ(pd_at_pfa(c, 0.1), 0.2);
    EXPECT_DOUBLE_EQ(pd_at_pfa(c, 0.7), 0.9);
    EXPECT_DOUBLE_EQ(pd_at_pfa(c, 0.0), 0.0);
    EXPECT_THROW(pd_at_pfa(c, 1.5), std::out_of_range);
}
