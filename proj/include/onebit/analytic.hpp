#pragma once

// Probability machinery behind the detector:
//  * the agreement probability p = P(y_2 = 1 | y_1 = 1, H1) = 2 P(z1 >= 0, z2 >= 0),
//    by the arcsine law and by direct quadrature of the bivariate normal;
//  * the Gaussian tail Q;
//  * mean/variance of the agreement count Y under each hypothesis;
//  * CLT-approximated and exact (H0) operating characteristics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "onebit/errors.hpp"
#include "onebit/model.hpp"
#include "onebit/roc.hpp"

namespace onebit {

enum class ProbMethod { ClosedForm, Quadrature };

/// PaperLiteral reproduces the printed H1 moments 2p(n-1)N and 2p(1-2p)(n-1)N.
/// Consistent uses p(n-1)N and p(1-p)(n-1)N.
enum class TheoryMode { PaperLiteral, Consistent };

inline std::string_view to_string(TheoryMode m) {
    return m == TheoryMode::PaperLiteral ? "paper" : "consistent";
}

struct AgreementProb {
    double p = 0.5;     ///< probability that consecutive bits agree under H1
    double rho = 0.0;   ///< r / (signal_var + noise_var)
    ProbMethod method = ProbMethod::ClosedForm;

    /// P(y_2 = 1 | y_1 = 0, H1).
    double p_prime() const noexcept { return 1.0 - p; }
};

struct TheoryMoments {
    double mean = 0.0;
    double variance = 0.0;
    Hypothesis hypothesis = Hypothesis::H0;
    TheoryMode mode = TheoryMode::Consistent;
};

namespace detail {

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double std_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double correlation(double c11, double c12, double c22) {
    if (!(c11 > 0.0) || !(c22 > 0.0) || !(c11 * c22 - c12 * c12 > 0.0))
        throw NonPositiveDefinite("2x2 covariance is not positive definite", 0);
    return c12 / std::sqrt(c11 * c22);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Arcsine law: P(z1 >= 0, z2 >= 0) = 1/4 + asin(rho) / (2 pi).
inline double orthant_prob_closed_form(double c11, double c12, double c22) {
    const double rho = detail::correlation(c11, c12, c22);
    return 0.25 + std::asin(rho) / (2.0 * std::numbers::pi);
}

/// P(z1 >= 0, z2 >= 0) for a zero-mean bivariate normal, by numerical
/// integration of the density.
///
/// Conditioning on the standardized first coordinate x reduces the double
/// integral to  int_0^inf phi(x) Phi(rho x / sqrt(1 - rho^2)) dx,  evaluated by
/// adaptive Simpson on [0, 10] (mass beyond ten standard deviations < 1e-23).
/// Absolute error is below 1e-9 for |rho| < 1.
inline double orthant_prob_quadrature(double c11, double c12, double c22) {
    const double rho = detail::correlation(c11, c12, c22);
    const double slope = rho / std::sqrt((1.0 - rho) * (1.0 + rho));
    auto integrand = [slope](double x) {
        return detail::std_normal_pdf(x) * detail::std_normal_cdf(slope * x);
    };
    constexpr double a = 0.0;
    constexpr double b = 10.0;
    constexpr double tol = 1e-12;
    // Split at a few points so the initial Simpson estimate cannot miss the
    // sharp step of Phi near x = 0 when |rho| -> 1.
    constexpr double breaks[] = {a, 1e-4, 1e-2, 0.5, 2.0, 5.0, b};
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < std::size(breaks); ++i) {
        const double lo = breaks[i];
        const double hi = breaks[i + 1];
        const double flo = integrand(lo);
        const double fhi = integrand(hi);
        const double fmid = integrand(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total += detail::adaptive_simpson(integrand, lo, hi, flo, fmid, fhi, whole, tol, 60);
    }
    return total;
}

/// Conditional agreement probability for the model's (z1, z2) pair, whose
/// covariance has C11 = C22 = signal_var + noise_var and C12 = r.
inline AgreementProb agreement_prob(const ModelParams& params,
                                    ProbMethod method = ProbMethod::ClosedForm) {
    require_valid(params);
    const double c = params.signal_var + params.noise_var;
    AgreementProb out;
    out.rho = params.r / c;
    out.method = method;
    if (method == ProbMethod::ClosedForm) {
        out.p = 0.5 + std::asin(out.rho) / std::numbers::pi;
    } else {
        out.p = 2.0 * orthant_prob_quadrature(c, params.r, c);
    }
    return out;
}

/// Standard normal upper tail, Q(x) = erfc(x / sqrt 2) / 2.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// Mean and variance of Y = sum_k sum_i I(y_{k,i+1} = y_{ki}) under h.
/// H0 moments are exact and identical in both modes.
inline TheoryMoments moments(const ModelParams& params, Hypothesis h, TheoryMode mode,
                             const AgreementProb& agree) {
    const double pairs = static_cast<double>(params.num_pairs());
    TheoryMoments m;
    m.hypothesis = h;
    m.mode = mode;
    if (h == Hypothesis::H0) {
        m.mean = 0.5 * pairs;
        m.variance = 0.25 * pairs;
        return m;
    }
    const double p = agree.p;
    if (mode == TheoryMode::PaperLiteral) {
        m.mean = 2.0 * p * pairs;
        m.variance = 2.0 * p * (1.0 - 2.0 * p) * pairs;
    } else {
        m.mean = p * pairs;
        m.variance = p * (1.0 - p) * pairs;
    }
    return m;
}

inline TheoryMoments moments(const ModelParams& params, Hypothesis h, TheoryMode mode) {
    return moments(params, h, mode, agreement_prob(params));
}

/// Gaussian-approximated probability that the detector fires.
/// Throws NegativeVariance when the variance is not strictly positive.
inline double gaussian_fire_prob(const TheoryMoments& m, double eta, DetectorDirection dir) {
    if (!(m.variance > 0.0)) {
        throw NegativeVariance(std::string("non-positive ") + std::string(to_string(m.hypothesis)) +
                                   " variance in " + std::string(to_string(m.mode)) + " mode",
                               m.variance);
    }
    const double z = (eta - m.mean) / std::sqrt(m.variance);
    return dir == DetectorDirection::GreaterIsH1 ? q_function(z) : q_function(-z);
}

/// CLT operating characteristic at each threshold.
inline RocCurve theory_roc(const ModelParams& params, TheoryMode mode,
                           std::span<const double> thresholds) {
    const auto agree = agreement_prob(params);
    const auto h0 = moments(params, Hypothesis::H0, mode, agree);
    const auto h1 = moments(params, Hypothesis::H1, mode, agree);
    RocCurve curve;
    curve.source = mode == TheoryMode::PaperLiteral ? RocSource::TheoryPaperLiteral
                                                    : RocSource::TheoryConsistent;
    curve.direction = roc_direction(params);
    curve.points.reserve(thresholds.size());
    for (double eta : thresholds) {
        curve.points.push_back({eta, gaussian_fire_prob(h0, eta, curve.direction),
                                gaussian_fire_prob(h1, eta, curve.direction)});
    }
    return curve;
}

/// Upper tail P(B >= k) of B ~ Binomial(trials, 1/2); exactly 1 for k <= 0 and
/// 0 for k > trials. Terms are accumulated from the top, so the result is
/// monotone in k to the last bit.
inline double binomial_half_upper_tail(std::int64_t trials, std::int64_t k) {
    if (k <= 0) return 1.0;
    if (k > trials) return 0.0;
    const double log_norm = std::lgamma(static_cast<double>(trials) + 1.0) -
                            static_cast<double>(trials) * std::numbers::ln2;
    double sum = 0.0;
    for (std::int64_t j = trials; j >= k; --j) {
        sum += std::exp(log_norm - std::lgamma(static_cast<double>(j) + 1.0) -
                        std::lgamma(static_cast<double>(trials - j) + 1.0));
    }
    return std::min(sum, 1.0);
}

/// Exact P(Y >= eta | H0). Under H0 every bit is an independent fair coin, so
/// the (n-1)N agreement indicators are iid Bernoulli(1/2) and Y is binomial.
inline double exact_h0_tail(const ModelParams& params, std::int64_t eta) {
    return binomial_half_upper_tail(static_cast<std::int64_t>(params.num_pairs()), eta);
}

/// Exact false-alarm probability at a real threshold for either direction.
inline double exact_h0_pfa(const ModelParams& params, double eta, DetectorDirection dir) {
    if (dir == DetectorDirection::GreaterIsH1) {
        return exact_h0_tail(params, static_cast<std::int64_t>(std::ceil(eta)));
    }
    // P(Y <= eta) = 1 - P(Y >= floor(eta) + 1)
    return 1.0 - exact_h0_tail(params, static_cast<std::int64_t>(std::floor(eta)) + 1);
}

/// Exact H0 false-alarm rate paired with the consistent-mode CLT detection rate.
inline RocCurve hybrid_roc(const ModelParams& params, std::span<const double> thresholds) {
    const auto h1 = moments(params, Hypothesis::H1, TheoryMode::Consistent);
    RocCurve curve;
    curve.source = RocSource::ExactH0Hybrid;
    curve.direction = roc_direction(params);
    curve.points.reserve(thresholds.size());
    for (double eta : thresholds) {
        curve.points.push_back({eta, exact_h0_pfa(params, eta, curve.direction),
                                gaussian_fire_prob(h1, eta, curve.direction)});
    }
    return curve;
}

}  // namespace onebit
