#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "onebit/errors.hpp"
#include "onebit/model.hpp"
#include "onebit/random.hpp"

namespace onebit {

/// Lower-bidiagonal L with L(i,i) = diag[i] and L(i+1,i) = subdiag[i], such
/// that L L^T is the tridiagonal Toeplitz signal covariance.
struct BidiagonalFactor {
    std::vector<double> diag;
    std::vector<double> subdiag;

    std::size_t size() const noexcept { return diag.size(); }
};

using SignalVector = std::vector<double>;

/// O(n) Cholesky of the tridiagonal Toeplitz covariance:
/// d_1 = sqrt(v), e_i = r / d_i, d_{i+1} = sqrt(v - e_i^2).
/// Throws NonPositiveDefinite at the first non-positive radicand.
inline BidiagonalFactor factor_covariance(std::size_t n, double signal_var, double r) {
    if (n == 0) throw DimensionMismatch("factor_covariance: n must be positive");
    BidiagonalFactor f;
    f.diag.resize(n);
    f.subdiag.resize(n - 1);
    if (!(signal_var > 0.0))
        throw NonPositiveDefinite("covariance not positive definite at pivot 1", 1);
    f.diag[0] = std::sqrt(signal_var);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        f.subdiag[i] = r / f.diag[i];
        const double radicand = signal_var - f.subdiag[i] * f.subdiag[i];
        if (!(radicand > 0.0)) {
            throw NonPositiveDefinite(
                "covariance not positive definite at pivot " + std::to_string(i + 2), i + 2);
        }
        f.diag[i + 1] = std::sqrt(radicand);
    }
    return f;
}

inline BidiagonalFactor factor_covariance(const ModelParams& p) {
    return factor_covariance(p.n, p.signal_var, p.r);
}

/// s = L g with g iid standard normal, written into `out` (size must match).
inline void sample_signal(const BidiagonalFactor& f, RandomStream& rng, std::span<double> out) {
    if (out.size() != f.size()) throw DimensionMismatch("sample_signal: output size mismatch");
    if (out.empty()) return;
    double prev = rng.normal();
    out[0] = f.diag[0] * prev;
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double g = rng.normal();
        out[i] = f.subdiag[i - 1] * prev + f.diag[i] * g;
        prev = g;
    }
}

inline SignalVector sample_signal(const BidiagonalFactor& f, RandomStream& rng) {
    SignalVector s(f.size());
    sample_signal(f, rng, s);
    return s;
}

/// One-bit quantizer: 1 for x >= 0, else 0.
constexpr std::uint8_t quantize(double x) noexcept { return x >= 0.0 ? 1 : 0; }

/// N x n matrix of one-bit observations, row k holding sensor k's sequence.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t sensors, std::size_t samples)
        : sensors_(sensors), samples_(samples), bits_(sensors * samples, 0) {}

    /// Builds from nested rows; all rows must have equal length.
    static BitMatrix from_rows(const std::vector<std::vector<std::uint8_t>>& rows) {
        BitMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (rows[k].size() != m.samples_) throw DimensionMismatch("BitMatrix: ragged rows");
            for (std::size_t i = 0; i < m.samples_; ++i) m.set(k, i, rows[k][i]);
        }
        return m;
    }

    std::size_t sensors() const noexcept { return sensors_; }
    std::size_t samples() const noexcept { return samples_; }

    std::uint8_t operator()(std::size_t k, std::size_t i) const noexcept {
        return bits_[k * samples_ + i];
    }

    void set(std::size_t k, std::size_t i, std::uint8_t bit) {
        if (bit > 1) throw std::invalid_argument("BitMatrix: bit must be 0 or 1");
        bits_[k * samples_ + i] = bit;
    }

    std::span<const std::uint8_t> row(std::size_t k) const noexcept {
        return {bits_.data() + k * samples_, samples_};
    }

    std::span<std::uint8_t> row(std::size_t k) noexcept {
        return {bits_.data() + k * samples_, samples_};
    }

    bool operator==(const BitMatrix&) const = default;

private:
    std::size_t sensors_ = 0;
    std::size_t samples_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// Draws one observation matrix under hypothesis h.
///
/// Under H1 a single signal vector is shared by every sensor; each sensor adds
/// its own noise. Draw order from `rng` is: the signal (H1 only), then noise
/// row by row. `quant` defaults to the 0/1 sign quantizer and exists so the
/// validation suite can inject a broken convention.
template <class Quantizer = decltype(&quantize)>
void observe_into(const ModelParams& p, const BidiagonalFactor& factor, Hypothesis h,
                  RandomStream& rng, BitMatrix& out, std::vector<double>& scratch,
                  Quantizer quant = &quantize) {
    if (out.sensors() != p.num_sensors || out.samples() != p.n)
        out = BitMatrix(p.num_sensors, p.n);
    scratch.assign(p.n, 0.0);
    if (h == Hypothesis::H1) sample_signal(factor, rng, scratch);
    const double noise_std = std::sqrt(p.noise_var);
    for (std::size_t k = 0; k < p.num_sensors; ++k) {
        auto row = out.row(k);
        for (std::size_t i = 0; i < p.n; ++i) {
            row[i] = quant(scratch[i] + noise_std * rng.normal());
        }
    }
}

inline BitMatrix observe(const ModelParams& p, Hypothesis h, RandomStream& rng) {
    require_valid(p);
    const auto factor = factor_covariance(p);
    BitMatrix out(p.num_sensors, p.n);
    std::vector<double> scratch;
    observe_into(p, factor, h, rng, out, scratch);
    return out;
}

}  // namespace onebit
