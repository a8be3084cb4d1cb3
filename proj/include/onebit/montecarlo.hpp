#pragma once

// Deterministic Monte Carlo estimation of false-alarm and detection rates.
//
// Trial t under hypothesis h draws from seed_for_trial(master_seed, h, t) and
// nothing else, and per-trial statistics are reduced into integer histograms.
// Integer addition is associative and commutative, so the result is identical
// for any worker count and any scheduling.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "onebit/analytic.hpp"
#include "onebit/detector.hpp"
#include "onebit/errors.hpp"
#include "onebit/model.hpp"
#include "onebit/random.hpp"
#include "onebit/roc.hpp"
#include "onebit/signal.hpp"

namespace onebit {

inline constexpr std::string_view kVersion = "1.0.0";
inline constexpr std::uint64_t kDefaultSeed = 20190417;

struct RunConfig {
    ModelParams params;
    std::size_t trials = 20000;
    std::uint64_t master_seed = kDefaultSeed;
    std::vector<double> thresholds;  ///< empty means sweep_thresholds(params)
    TheoryMode theory_mode = TheoryMode::Consistent;
    std::string label;               ///< used for output file names
    /// Worker threads; 0 picks the hardware concurrency. Never affects results.
    std::size_t workers = 1;
};

inline void validate_config(const RunConfig& cfg) {
    require_valid(cfg.params);
    if (cfg.trials < 1) throw InvalidConfig("trials >= 1 required");
    for (std::size_t i = 1; i < cfg.thresholds.size(); ++i) {
        if (!(cfg.thresholds[i] > cfg.thresholds[i - 1]))
            throw InvalidConfig("thresholds must be strictly increasing");
    }
}

inline std::vector<double> resolved_thresholds(const RunConfig& cfg) {
    return cfg.thresholds.empty() ? sweep_thresholds(cfg.params) : cfg.thresholds;
}

/// Stream for one trial. Pure in its arguments and injective over them.
inline RandomStream seed_for_trial(std::uint64_t master_seed, Hypothesis h,
                                   std::uint64_t trial_index) noexcept {
    return RandomStream(master_seed, h == Hypothesis::H0 ? 0 : 1, trial_index);
}

/// counts[y] = number of trials whose statistic equalled y.
struct StatisticHistogram {
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const noexcept {
        std::uint64_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }

    /// Trials that fire at threshold eta.
    std::uint64_t firing(double eta, DetectorDirection dir) const noexcept {
        std::uint64_t n = 0;
        for (std::size_t y = 0; y < counts.size(); ++y) {
            if (decide(DetectionStatistic{static_cast<std::int64_t>(y)}, eta, dir).d_hat)
                n += counts[y];
        }
        return n;
    }

    double mean() const noexcept {
        double s = 0.0;
        for (std::size_t y = 0; y < counts.size(); ++y) s += static_cast<double>(y * counts[y]);
        return s / static_cast<double>(total());
    }

    /// Unbiased sample variance.
    double variance() const noexcept {
        const double m = mean();
        double ss = 0.0;
        for (std::size_t y = 0; y < counts.size(); ++y) {
            const double d = static_cast<double>(y) - m;
            ss += d * d * static_cast<double>(counts[y]);
        }
        return ss / static_cast<double>(total() - 1);
    }

    StatisticHistogram& operator+=(const StatisticHistogram& other) {
        if (counts.size() < other.counts.size()) counts.resize(other.counts.size(), 0);
        for (std::size_t y = 0; y < other.counts.size(); ++y) counts[y] += other.counts[y];
        return *this;
    }
};

inline std::size_t resolve_workers(std::size_t requested, std::size_t trials) {
    std::size_t w = requested;
    if (w == 0) w = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    return std::clamp<std::size_t>(w, 1, std::max<std::size_t>(1, trials));
}

/// Simulates trials [0, cfg.trials) under h and histograms the statistic.
template <class Quantizer = decltype(&quantize)>
StatisticHistogram simulate_histogram(const RunConfig& cfg, Hypothesis h,
                                      Quantizer quant = &quantize) {
    validate_config(cfg);
    const auto& params = cfg.params;
    const auto factor = factor_covariance(params);
    const std::size_t bins = params.num_pairs() + 1;

    auto run_range = [&](std::size_t begin, std::size_t end, StatisticHistogram& hist) {
        hist.counts.assign(bins, 0);
        BitMatrix bits(params.num_sensors, params.n);
        std::vector<double> scratch;
        for (std::size_t t = begin; t < end; ++t) {
            auto rng = seed_for_trial(cfg.master_seed, h, t);
            observe_into(params, factor, h, rng, bits, scratch, quant);
            ++hist.counts[static_cast<std::size_t>(statistic(bits).y_count)];
        }
    };

    const std::size_t workers = resolve_workers(cfg.workers, cfg.trials);
    std::vector<StatisticHistogram> partial(workers);
    if (workers == 1) {
        run_range(0, cfg.trials, partial[0]);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (cfg.trials + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(cfg.trials, w * chunk);
            const std::size_t end = std::min(cfg.trials, begin + chunk);
            pool.emplace_back([&, w, begin, end] { run_range(begin, end, partial[w]); });
        }
    }
    StatisticHistogram total;
    total.counts.assign(bins, 0);
    for (const auto& p : partial) total += p;
    return total;
}

/// Empirical curve from already-simulated histograms.
inline RocCurve rates_from_histograms(const StatisticHistogram& h0, const StatisticHistogram& h1,
                                      std::span<const double> thresholds, DetectorDirection dir) {
    RocCurve curve;
    curve.source = RocSource::Empirical;
    curve.direction = dir;
    curve.trials_used = static_cast<std::size_t>(h0.total());
    const double t0 = static_cast<double>(h0.total());
    const double t1 = static_cast<double>(h1.total());
    curve.points.reserve(thresholds.size());
    for (double eta : thresholds) {
        curve.points.push_back({eta, static_cast<double>(h0.firing(eta, dir)) / t0,
                                static_cast<double>(h1.firing(eta, dir)) / t1});
    }
    return curve;
}

struct EmpiricalRun {
    StatisticHistogram h0;
    StatisticHistogram h1;
    RocCurve curve;
};

inline EmpiricalRun run_empirical(const RunConfig& cfg) {
    EmpiricalRun run;
    run.h0 = simulate_histogram(cfg, Hypothesis::H0);
    run.h1 = simulate_histogram(cfg, Hypothesis::H1);
    const auto thresholds = resolved_thresholds(cfg);
    run.curve = rates_from_histograms(run.h0, run.h1, thresholds, roc_direction(cfg.params));
    return run;
}

/// `trials` H0 and `trials` H1 trials; pfa/pd are firing fractions per threshold.
inline RocCurve estimate_rates(const RunConfig& cfg) { return run_empirical(cfg).curve; }

struct ComparisonRow {
    double eta = 0.0;
    double pfa_emp = 0.0;
    double pd_emp = 0.0;
    double pfa_theory = 0.0;
    std::optional<double> pd_theory;  ///< empty when the H1 variance is not positive
    double pfa_exact = 0.0;

    double dev_pfa_exact() const { return std::abs(pfa_exact - pfa_emp); }
    double dev_pfa_theory() const { return std::abs(pfa_theory - pfa_emp); }
    double dev_pfa_theory_exact() const { return std::abs(pfa_theory - pfa_exact); }
    std::optional<double> dev_pd_theory() const {
        if (!pd_theory) return std::nullopt;
        return std::abs(*pd_theory - pd_emp);
    }
    bool negative_variance() const { return !pd_theory.has_value(); }
};

struct TheoryComparison {
    TheoryMode mode = TheoryMode::Consistent;
    AgreementProb agreement;
    TheoryMoments h0;
    TheoryMoments h1;
    DetectorDirection direction = DetectorDirection::GreaterIsH1;
    std::size_t trials = 0;
    std::vector<ComparisonRow> rows;
};

/// Joins an empirical curve with CLT and exact-binomial rates at the same thresholds.
inline TheoryComparison compare_theory(const RunConfig& cfg, const RocCurve& empirical,
                                       TheoryMode mode) {
    TheoryComparison out;
    out.mode = mode;
    out.agreement = agreement_prob(cfg.params);
    out.h0 = moments(cfg.params, Hypothesis::H0, mode, out.agreement);
    out.h1 = moments(cfg.params, Hypothesis::H1, mode, out.agreement);
    out.direction = empirical.direction;
    out.trials = empirical.trials_used;
    out.rows.reserve(empirical.points.size());
    for (const auto& pt : empirical.points) {
        ComparisonRow row;
        row.eta = pt.eta;
        row.pfa_emp = pt.pfa;
        row.pd_emp = pt.pd;
        row.pfa_theory = gaussian_fire_prob(out.h0, pt.eta, out.direction);
        if (out.h1.variance > 0.0) row.pd_theory = gaussian_fire_prob(out.h1, pt.eta, out.direction);
        row.pfa_exact = exact_h0_pfa(cfg.params, pt.eta, out.direction);
        out.rows.push_back(row);
    }
    return out;
}

inline TheoryComparison compare_theory(const RunConfig& cfg) {
    return compare_theory(cfg, estimate_rates(cfg), cfg.theory_mode);
}

struct RunManifest {
    std::vector<RunConfig> configs;
    std::string sigma_interpretation =
        "noise_std is the noise standard deviation sigma; noise_var = noise_std^2";
    std::string version{kVersion};
    std::string rng_scheme{kRngScheme};
    double wall_seconds = 0.0;
};

}  // namespace onebit
