#pragma once

// Parameters of the one-bit sensing model:
//
//   H0: y_ki = sgn(w_ki)
//   H1: y_ki = sgn(s_i + w_ki)
//
// where s is a zero-mean Gaussian vector with tridiagonal Toeplitz covariance
// (diagonal signal_var, first off-diagonal r) shared by all sensors, and w_ki
// is iid N(0, noise_var) per sensor and time index.

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "onebit/errors.hpp"

namespace onebit {

enum class Hypothesis { H0, H1 };

/// Which tail of the agreement count declares the signal present.
enum class DetectorDirection { GreaterIsH1, LessIsH1 };

inline std::string_view to_string(Hypothesis h) {
    return h == Hypothesis::H0 ? "H0" : "H1";
}

inline std::string_view to_string(DetectorDirection d) {
    return d == DetectorDirection::GreaterIsH1 ? "greater" : "less";
}

struct ModelParams {
    std::size_t n = 20;            ///< samples per sensor
    std::size_t num_sensors = 1;   ///< N
    double signal_var = 1.0;       ///< sigma_s^2
    double r = 0.5;                ///< E[s_i s_{i+1}]
    double noise_var = 1e-4;       ///< sigma^2

    /// Number of consecutive pairs summed by the statistic, (n-1)*N.
    std::size_t num_pairs() const noexcept { return (n - 1) * num_sensors; }

    bool operator==(const ModelParams&) const = default;
};

struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    bool ok() const noexcept { return violations.empty(); }

    std::string summary() const {
        std::string out;
        for (const auto& v : violations) {
            if (!out.empty()) out += "; ";
            out += v;
        }
        return out;
    }
};

inline constexpr std::string_view kUncorrelatedWarning =
    "r = 0: no correlation, detector uninformative";

/// Checks every model invariant. Never throws; failures are listed in the report.
///
/// Positive definiteness uses the closed condition signal_var >= 2|r|. The
/// tridiagonal Toeplitz eigenvalues are signal_var + 2 r cos(k pi / (n + 1)),
/// k = 1..n, and cos(pi / (n + 1)) < 1, so equality is still definite for
/// every finite n.
inline ValidationReport validate(const ModelParams& p) {
    ValidationReport rep;
    if (p.n < 2) rep.violations.emplace_back("n >= 2 required");
    if (p.num_sensors < 1) rep.violations.emplace_back("num_sensors >= 1 required");
    if (!std::isfinite(p.signal_var) || !(p.signal_var > 0.0))
        rep.violations.emplace_back("signal_var > 0 required");
    if (!std::isfinite(p.noise_var) || !(p.noise_var > 0.0))
        rep.violations.emplace_back("noise_var > 0 required");
    if (!std::isfinite(p.r)) {
        rep.violations.emplace_back("r must be finite");
    } else if (!(p.signal_var >= 2.0 * std::abs(p.r))) {
        rep.violations.emplace_back("signal_var >= 2|r| required for a positive-definite covariance");
    }
    if (rep.ok() && p.r == 0.0) rep.warnings.emplace_back(kUncorrelatedWarning);
    return rep;
}

/// Throws InvalidConfig listing every violation.
inline void require_valid(const ModelParams& p) {
    auto rep = validate(p);
    if (!rep.ok()) throw InvalidConfig("invalid model parameters: " + rep.summary());
}

/// r > 0 favours agreement under H1, r < 0 favours disagreement.
/// r == 0 leaves the bits uninformative and is rejected.
inline DetectorDirection direction_for(const ModelParams& p) {
    if (p.r > 0.0) return DetectorDirection::GreaterIsH1;
    if (p.r < 0.0) return DetectorDirection::LessIsH1;
    throw InvalidConfig("r = 0 gives no detector direction: one-bit samples carry no information");
}

}  // namespace onebit
