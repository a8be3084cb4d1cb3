#include <gtest/gtest.h>

#include <algorithm>

#include "onebit/io.hpp"
#include "onebit/model.hpp"
#include "onebit/signal.hpp"

using namespace onebit;

namespace {

ModelParams make(double r, double signal_var = 1.0) {
    ModelParams p;
    p.n = 20;
    p.num_sensors = 1;
    p.signal_var = signal_var;
    p.r = r;
    p.noise_var = 1e-4;
    return p;
}

}  // namespace

TEST(Validate, AcceptsStrongestFigureCorrelation) {
    const auto rep = validate(make(0.5));
    EXPECT_TRUE(rep.ok());
    EXPECT_TRUE(rep.warnings.empty());
}

TEST(Validate, RejectsCovarianceBeyondDiagonalDominance) {
    const auto rep = validate(make(0.6));
    ASSERT_FALSE(rep.ok());
    EXPECT_NE(rep.summary().find("signal_var >= 2|r|"), std::string::npos);
}

TEST(Validate, BoundaryIsInclusive) {
    // |r| = signal_var / 2 keeps every finite-n covariance definite.
    EXPECT_TRUE(validate(make(0.5, 1.0)).ok());
    EXPECT_TRUE(validate(make(-0.5, 1.0)).ok());
    EXPECT_FALSE(validate(make(0.5, 1.0 - 1e-12)).ok());
    EXPECT_FALSE(validate(make(-0.5, 1.0 - 1e-12)).ok());
}

TEST(Validate, BoundaryCorrelationStillFactors) {
    // Pivots d_i^2 = (i + 1) / (2 i) stay positive at r = signal_var / 2.
    const auto f = factor_covariance(200, 1.0, 0.5);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double expected = static_cast<double>(i + 2) / (2.0 * static_cast<double>(i + 1));
        EXPECT_NEAR(f.diag[i] * f.diag[i], expected, 1e-12);
    }
}

TEST(Validate, ZeroCorrelationIsAcceptedWithWarning) {
    const auto rep = validate(make(0.0));
    EXPECT_TRUE(rep.ok());
    ASSERT_EQ(rep.warnings.size(), 1u);
    EXPECT_EQ(rep.warnings.front(), kUncorrelatedWarning);
}

TEST(Validate, NegativeCorrelationAccepted) { EXPECT_TRUE(validate(make(-0.3)).ok()); }

TEST(Validate, ListsEveryViolation) {
    ModelParams p;
    p.n = 1;
    p.num_sensors = 0;
    p.signal_var = -1.0;
    p.noise_var = 0.0;
    const auto rep = validate(p);
    EXPECT_GE(rep.violations.size(), 4u);
    EXPECT_THROW(require_valid(p), InvalidConfig);
}

TEST(Validate, AcceptsEveryPresetConfiguration) {
    for (const char* name : {"fig2", "fig3"}) {
        for (const auto& cfg : expand_preset(name)) EXPECT_TRUE(validate(cfg.params).ok()) << cfg.label;
    }
}

TEST(Direction, FollowsSignOfCorrelation) {
    EXPECT_EQ(direction_for(make(0.3)), DetectorDirection::GreaterIsH1);
    EXPECT_EQ(direction_for(make(-0.3)), DetectorDirection::LessIsH1);
    EXPECT_THROW(direction_for(make(0.0)), InvalidConfig);
}
