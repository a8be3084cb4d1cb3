#pragma once

// Built-in oracle suite: every check compares the library against an
// independent route (quadrature, exact binomial, replay).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "onebit/analytic.hpp"
#include "onebit/detector.hpp"
#include "onebit/io.hpp"
#include "onebit/montecarlo.hpp"

namespace onebit {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationOptions {
    std::size_t trials = 20000;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::size_t workers = 1;
    /// Quantizer used for simulated observations; replaceable for mutation tests.
    std::function<std::uint8_t(double)> quantizer = [](double x) { return quantize(x); };
};

inline ValidationOptions quick_validation_options() {
    ValidationOptions o;
    o.trials = 2000;
    return o;
}

struct ChiSquareResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
};

/// Pearson goodness of fit of observed counts against model probabilities.
/// Adjacent bins are pooled from each end until every pooled expectation is >= 5.
inline ChiSquareResult chi_square_gof(const std::vector<std::uint64_t>& observed,
                                      const std::vector<double>& probs) {
    double total = 0.0;
    for (auto c : observed) total += static_cast<double>(c);
    std::vector<double> obs;
    std::vector<double> exp;
    double o_acc = 0.0;
    double e_acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        o_acc += i < observed.size() ? static_cast<double>(observed[i]) : 0.0;
        e_acc += probs[i] * total;
        if (e_acc >= 5.0) {
            obs.push_back(o_acc);
            exp.push_back(e_acc);
            o_acc = e_acc = 0.0;
        }
    }
    if (e_acc > 0.0 || o_acc > 0.0) {
        if (exp.empty()) {
            obs.push_back(o_acc);
            exp.push_back(e_acc);
        } else {
            obs.back() += o_acc;
            exp.back() += e_acc;
        }
    }
    ChiSquareResult r;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const double d = obs[i] - exp[i];
        r.statistic += d * d / exp[i];
    }
    r.dof = obs.size() > 1 ? obs.size() - 1 : 1;
    boost::math::chi_squared dist(static_cast<double>(r.dof));
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
    return r;
}

/// Binomial(trials, 1/2) probability mass at each count.
inline std::vector<double> binomial_half_pmf(std::int64_t trials) {
    std::vector<double> pmf(static_cast<std::size_t>(trials) + 1);
    for (std::int64_t k = 0; k <= trials; ++k)
        pmf[static_cast<std::size_t>(k)] =
            binomial_half_upper_tail(trials, k) - binomial_half_upper_tail(trials, k + 1);
    return pmf;
}

/// Reference model used by the simulation checks: n = 20, one sensor, r = 0.5.
inline ModelParams reference_params() {
    ModelParams p;
    p.n = 20;
    p.num_sensors = 1;
    p.signal_var = 1.0;
    p.r = 0.5;
    p.noise_var = 1e-4;
    return p;
}

inline CheckResult check_orthant_closed_form() {
    constexpr double kTol = 1e-6;
    double worst = 0.0;
    for (double rho : {-0.49, -0.25, 0.0, 0.1, 0.25, 0.49}) {
        for (double noise_var : {1e-4, 1e-2, 1.0}) {
            const double c = 1.0 + noise_var;
            const double closed = 0.5 + std::asin(rho) / std::numbers::pi;
            const double quad = 2.0 * orthant_prob_quadrature(c, rho * c, c);
            worst = std::max(worst, std::abs(closed - quad));
        }
    }
    return {"orthant closed form vs quadrature", worst <= kTol,
            "max |p_closed - 2*orthant_quad| = " + format_float(worst) + " (tol 1e-6)"};
}

inline std::vector<StatisticHistogram> h0_histograms(const ValidationOptions& opts) {
    std::vector<StatisticHistogram> out;
    for (auto seed : opts.seeds) {
        RunConfig cfg;
        cfg.params = reference_params();
        cfg.trials = opts.trials;
        cfg.master_seed = seed;
        cfg.workers = opts.workers;
        out.push_back(simulate_histogram(cfg, Hypothesis::H0, opts.quantizer));
    }
    return out;
}

/// Empirical Pfa, averaged over seeds, within 3 sqrt(q(1-q)/trials) of the
/// exact binomial tail at every threshold.
inline CheckResult check_h0_exact_binomial(const ValidationOptions& opts,
                                           const std::vector<StatisticHistogram>& hists) {
    const auto params = reference_params();
    StatisticHistogram pooled;
    for (const auto& h : hists) pooled += h;
    const double total = static_cast<double>(pooled.total());
    double worst_ratio = 0.0;
    double worst_eta = 0.0;
    for (double eta : sweep_thresholds(params)) {
        const double q = exact_h0_pfa(params, eta, DetectorDirection::GreaterIsH1);
        const double emp =
            static_cast<double>(pooled.firing(eta, DetectorDirection::GreaterIsH1)) / total;
        const double band = 3.0 * std::sqrt(q * (1.0 - q) / static_cast<double>(opts.trials));
        const double dev = std::abs(emp - q);
        const double ratio = band > 0.0 ? dev / band : (dev > 0.0 ? INFINITY : 0.0);
        if (ratio > worst_ratio) {
            worst_ratio = ratio;
            worst_eta = eta;
        }
    }
    return {"H0 empirical Pfa vs exact binomial", worst_ratio <= 1.0,
            "worst deviation/band = " + format_float(worst_ratio) + " at eta " +
                format_float(worst_eta)};
}

inline CheckResult check_h0_chi_square(const std::vector<StatisticHistogram>& hists) {
    StatisticHistogram pooled;
    for (const auto& h : hists) pooled += h;
    const auto pmf = binomial_half_pmf(static_cast<std::int64_t>(reference_params().num_pairs()));
    const auto gof = chi_square_gof(pooled.counts, pmf);
    return {"H0 statistic ~ Binomial(19, 1/2) (chi-square, alpha 0.01)", gof.p_value >= 0.01,
            "chi2 = " + format_float(gof.statistic) + ", dof = " + std::to_string(gof.dof) +
                ", p = " + format_float(gof.p_value)};
}

/// Gaussian approximation of the H0 tail at n = 20 stays within 0.02 of exact.
inline CheckResult check_h0_clt_quality() {
    const auto params = reference_params();
    const auto h0 = moments(params, Hypothesis::H0, TheoryMode::Consistent);
    double worst = 0.0;
    for (double eta : sweep_thresholds(params)) {
        const double clt = gaussian_fire_prob(h0, eta, DetectorDirection::GreaterIsH1);
        const double exact = exact_h0_pfa(params, eta, DetectorDirection::GreaterIsH1);
        worst = std::max(worst, std::abs(clt - exact));
    }
    return {"H0 CLT approximation vs exact binomial", worst <= 0.02,
            "max |Q - exact| = " + format_float(worst) + " (tol 0.02)"};
}

/// Serial and multi-worker runs of a three-sensor config give identical curves.
inline CheckResult check_determinism(const ValidationOptions& opts) {
    RunConfig cfg;
    cfg.params = reference_params();
    cfg.params.num_sensors = 3;
    cfg.trials = opts.trials;
    cfg.master_seed = opts.seeds.empty() ? kDefaultSeed : opts.seeds.front();
    cfg.workers = 1;
    const auto serial = run_empirical(cfg);
    cfg.workers = 4;
    const auto parallel = run_empirical(cfg);
    const bool same = serial.h0.counts == parallel.h0.counts && serial.h1.counts == parallel.h1.counts;
    return {"determinism replay (1 vs 4 workers)", same,
            same ? "histograms identical" : "histograms differ"};
}

inline std::vector<CheckResult> run_oracle_suite(const ValidationOptions& opts) {
    std::vector<CheckResult> results;
    results.push_back(check_orthant_closed_form());
    const auto hists = h0_histograms(opts);
    results.push_back(check_h0_exact_binomial(opts, hists));
    results.push_back(check_h0_chi_square(hists));
    results.push_back(check_h0_clt_quality());
    results.push_back(check_determinism(opts));
    return results;
}

inline bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

inline std::string format_report(const std::vector<CheckResult>& results) {
    std::string out;
    for (const auto& r : results)
        out += std::string(r.passed ? "PASS" : "FAIL") + "  " + r.name + ": " + r.detail + '\n';
    out += all_passed(results) ? "RESULT: all checks passed\n" : "RESULT: FAILED\n";
    return out;
}

}  // namespace onebit
