#pragma once

// The likelihood-ratio detector for one-bit observations reduces to counting
// consecutive-in-time agreements,
//
//   Y = sum_{k=1}^{N} sum_{i=1}^{n-1} I(y_{k,i+1} = y_{ki}),
//
// and comparing Y against a threshold. The tail that signals H1 follows the
// sign of the lag-one correlation r.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "onebit/errors.hpp"
#include "onebit/model.hpp"
#include "onebit/signal.hpp"

namespace onebit {

struct DetectionStatistic {
    std::int64_t y_count = 0;

    auto operator<=>(const DetectionStatistic&) const = default;
};

struct Decision {
    std::uint8_t d_hat = 0;  ///< 1 declares H1

    bool operator==(const Decision&) const = default;
};

inline std::int64_t count_agreements(std::span<const std::uint8_t> row) noexcept {
    std::int64_t count = 0;
    for (std::size_t i = 1; i < row.size(); ++i) count += row[i] == row[i - 1];
    return count;
}

inline DetectionStatistic statistic(const BitMatrix& bits) {
    if (bits.sensors() < 1 || bits.samples() < 2)
        throw DimensionMismatch("statistic: need at least one sensor and two samples");
    DetectionStatistic y;
    for (std::size_t k = 0; k < bits.sensors(); ++k) y.y_count += count_agreements(bits.row(k));
    return y;
}

/// As above, additionally checking that the matrix matches the model's N x n.
inline DetectionStatistic statistic(const BitMatrix& bits, const ModelParams& params) {
    if (bits.sensors() != params.num_sensors || bits.samples() != params.n)
        throw DimensionMismatch("statistic: bit matrix does not match model dimensions");
    return statistic(bits);
}

/// Ties fire: GreaterIsH1 declares H1 iff Y >= eta, LessIsH1 iff Y <= eta.
constexpr Decision decide(DetectionStatistic stat, double eta, DetectorDirection dir) noexcept {
    const auto y = static_cast<double>(stat.y_count);
    const bool fire = dir == DetectorDirection::GreaterIsH1 ? y >= eta : y <= eta;
    return Decision{static_cast<std::uint8_t>(fire ? 1 : 0)};
}

/// Half-integer grid -0.5, 0.5, ..., (n-1)N + 0.5. Each achievable operating
/// point of the integer statistic is hit once and ties never occur.
inline std::vector<double> sweep_thresholds(const ModelParams& params) {
    const std::size_t max_y = params.num_pairs();
    std::vector<double> grid;
    grid.reserve(max_y + 2);
    for (std::size_t j = 0; j <= max_y + 1; ++j) grid.push_back(static_cast<double>(j) - 0.5);
    return grid;
}

}  // namespace onebit
