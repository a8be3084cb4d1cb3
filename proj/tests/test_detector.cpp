#include <gtest/gtest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "onebit/detector.hpp"

using namespace onebit;

namespace {

BitMatrix rows(std::vector<std::vector<std::uint8_t>> r) { return BitMatrix::from_rows(r); }

BitMatrix from_mask(std::uint64_t mask, std::size_t sensors, std::size_t samples) {
    BitMatrix m(sensors, samples);
    for (std::size_t k = 0; k < sensors; ++k)
        for (std::size_t i = 0; i < samples; ++i) m.set(k, i, (mask >> (k * samples + i)) & 1u);
    return m;
}

}  // namespace

TEST(Statistic, AllAgree) { EXPECT_EQ(statistic(rows({{1, 1, 1, 1}})).y_count, 3); }

TEST(Statistic, Alternating) { EXPECT_EQ(statistic(rows({{1, 0, 1, 0, 1}})).y_count, 0); }

TEST(Statistic, TwoSensorsSum) {
    // Row 1 agrees at pairs (2,3) and (4,5); row 2 at (1,2), (3,4) and (4,5).
    EXPECT_EQ(statistic(rows({{1, 0, 0, 1, 1}})).y_count, 2);
    EXPECT_EQ(statistic(rows({{0, 0, 1, 1, 1}})).y_count, 3);
    EXPECT_EQ(statistic(rows({{1, 0, 0, 1, 1}, {0, 0, 1, 1, 1}})).y_count, 5);
}

TEST(Statistic, RejectsDegenerateShapes) {
    EXPECT_THROW(statistic(BitMatrix(1, 1)), DimensionMismatch);
    EXPECT_THROW(statistic(BitMatrix(0, 5)), DimensionMismatch);
    ModelParams p;
    p.n = 5;
    p.num_sensors = 2;
    EXPECT_THROW(statistic(BitMatrix(2, 4), p), DimensionMismatch);
    EXPECT_NO_THROW(statistic(BitMatrix(2, 5), p));
}

TEST(Statistic, BoundsComplementAndRowAdditivity) {
    std::mt19937_64 gen(3);
    for (int t = 0; t < 500; ++t) {
        const std::size_t sensors = 1 + gen() % 4;
        const std::size_t samples = 2 + gen() % 30;
        BitMatrix m(sensors, samples);
        BitMatrix complement(sensors, samples);
        for (std::size_t k = 0; k < sensors; ++k) {
            for (std::size_t i = 0; i < samples; ++i) {
                const auto b = static_cast<std::uint8_t>(gen() & 1u);
                m.set(k, i, b);
                complement.set(k, i, static_cast<std::uint8_t>(1u - b));
            }
        }
        const auto y = statistic(m).y_count;
        EXPECT_GE(y, 0);
        EXPECT_LE(y, static_cast<std::int64_t>((samples - 1) * sensors));
        EXPECT_EQ(y, statistic(complement).y_count);
        std::int64_t by_rows = 0;
        for (std::size_t k = 0; k < sensors; ++k) {
            BitMatrix single(1, samples);
            for (std::size_t i = 0; i < samples; ++i) single.set(0, i, m(k, i));
            by_rows += statistic(single).y_count;
        }
        EXPECT_EQ(y, by_rows);
    }
}

TEST(Decide, InclusiveThresholdAndDirection) {
    EXPECT_EQ(decide({10}, 9.5, DetectorDirection::GreaterIsH1).d_hat, 1);
    EXPECT_EQ(decide({10}, 10.0, DetectorDirection::GreaterIsH1).d_hat, 1);
    EXPECT_EQ(decide({9}, 9.5, DetectorDirection::GreaterIsH1).d_hat, 0);
    EXPECT_EQ(decide({3}, 9.5, DetectorDirection::LessIsH1).d_hat, 1);
    EXPECT_EQ(decide({10}, 10.0, DetectorDirection::LessIsH1).d_hat, 1);
    EXPECT_EQ(decide({11}, 10.0, DetectorDirection::LessIsH1).d_hat, 0);
}

TEST(Decide, MonotoneInStatistic) {
    for (double eta = -1.0; eta <= 30.0; eta += 0.5) {
        for (std::int64_t y1 = 0; y1 <= 29; ++y1) {
            for (std::int64_t y2 = y1; y2 <= 29; ++y2) {
                if (decide({y1}, eta, DetectorDirection::GreaterIsH1).d_hat) {
                    ASSERT_EQ(decide({y2}, eta, DetectorDirection::GreaterIsH1).d_hat, 1);
                }
                if (decide({y2}, eta, DetectorDirection::LessIsH1).d_hat) {
                    ASSERT_EQ(decide({y1}, eta, DetectorDirection::LessIsH1).d_hat, 1);
                }
            }
        }
    }
}

TEST(SweepThresholds, GridSizes) {
    ModelParams p;
    p.n = 3;
    p.num_sensors = 1;
    EXPECT_EQ(sweep_thresholds(p), (std::vector<double>{-0.5, 0.5, 1.5, 2.5}));
    p.n = 20;
    EXPECT_EQ(sweep_thresholds(p).size(), 21u);
    p.num_sensors = 3;
    const auto grid = sweep_thresholds(p);
    EXPECT_EQ(grid.size(), 59u);
    EXPECT_EQ(grid.front(), -0.5);
    EXPECT_EQ(grid.back(), 57.5);
}

TEST(Decide, BruteForceAgainstDoubleSum) {
    struct Shape {
        std::size_t samples, sensors;
    };
    for (auto [n, sensors] : {Shape{2, 1}, Shape{3, 1}, Shape{4, 1}, Shape{2, 2}, Shape{3, 2}, Shape{4, 2}}) {
        const std::uint64_t count = 1ull << (n * sensors);
        ModelParams p;
        p.n = n;
        p.num_sensors = sensors;
        for (double eta : sweep_thresholds(p)) {
            for (std::uint64_t mask = 0; mask < count; ++mask) {
                const auto m = from_mask(mask, sensors, n);
                // Direct double sum over time and sensor of I(y[k][i+1] == y[k][i]).
                std::int64_t direct = 0;
                for (std::size_t i = 0; i + 1 < n; ++i)
                    for (std::size_t k = 0; k < sensors; ++k)
                        direct += ((mask >> (k * n + i + 1)) & 1u) == ((mask >> (k * n + i)) & 1u);
                ASSERT_EQ(decide(statistic(m), eta, DetectorDirection::GreaterIsH1).d_hat,
                          direct >= eta ? 1 : 0);
            }
        }
    }
}
