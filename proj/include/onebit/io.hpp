#pragma once

// Run configuration files, experiment presets and curve serialization.
//
// Config files are flat `key = value` text; `#` starts a comment. Keys:
//   n            samples per sensor                    (integer >= 2)
//   num_sensors  N                                     (integer >= 1)
//   signal_var   signal variance sigma_s^2             (> 0)
//   r            lag-one signal covariance             (|r| < signal_var / 2)
//   noise_std    noise standard deviation sigma        (> 0), noise_var = noise_std^2
//   trials       trials per hypothesis                 (>= 1)
//   seed         master seed                           (unsigned 64-bit)
//   mode         theory mode: paper | consistent
//   thresholds   comma-separated, strictly increasing  (optional)
//   label        output file stem                      (optional)

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "onebit/analytic.hpp"
#include "onebit/errors.hpp"
#include "onebit/montecarlo.hpp"

namespace onebit {

/// %.9g, the fixed float format of every CSV cell.
inline std::string format_float(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

inline TheoryMode parse_mode(std::string_view s) {
    if (s == "paper") return TheoryMode::PaperLiteral;
    if (s == "consistent") return TheoryMode::Consistent;
    throw InvalidConfig("mode must be 'paper' or 'consistent', got '" + std::string(s) + "'");
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty()) throw InvalidConfig(key + ": not a number: '" + v + "'");
    return x;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
    Int x{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw InvalidConfig(key + ": not a non-negative integer: '" + v + "'");
    return x;
}

}  // namespace detail

/// Parses config text. Unknown keys and malformed values throw InvalidConfig;
/// the result is not validated (see validate_config).
inline RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto body = detail::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw InvalidConfig("line " + std::to_string(lineno) + ": expected key = value");
        const auto key = detail::trim(std::string_view(body).substr(0, eq));
        const auto value = detail::trim(std::string_view(body).substr(eq + 1));
        if (key == "n") {
            cfg.params.n = detail::parse_int<std::size_t>(key, value);
        } else if (key == "num_sensors") {
            cfg.params.num_sensors = detail::parse_int<std::size_t>(key, value);
        } else if (key == "signal_var") {
            cfg.params.signal_var = detail::parse_double(key, value);
        } else if (key == "r") {
            cfg.params.r = detail::parse_double(key, value);
        } else if (key == "noise_std") {
            const double s = detail::parse_double(key, value);
            if (!(s > 0.0)) throw InvalidConfig("noise_std > 0 required");
            cfg.params.noise_var = s * s;
        } else if (key == "trials") {
            cfg.trials = detail::parse_int<std::size_t>(key, value);
        } else if (key == "seed") {
            cfg.master_seed = detail::parse_int<std::uint64_t>(key, value);
        } else if (key == "mode") {
            cfg.theory_mode = parse_mode(value);
        } else if (key == "thresholds") {
            cfg.thresholds.clear();
            std::istringstream list(value);
            std::string item;
            while (std::getline(list, item, ','))
                cfg.thresholds.push_back(detail::parse_double(key, detail::trim(item)));
        } else if (key == "label") {
            cfg.label = value;
        } else {
            throw InvalidConfig("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

/// Default output stem when a config carries no label.
inline std::string default_label(const RunConfig& cfg) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "n%zu_N%zu_r%g", cfg.params.n, cfg.params.num_sensors,
                  cfg.params.r);
    return buf;
}

inline std::string label_of(const RunConfig& cfg) {
    return cfg.label.empty() ? default_label(cfg) : cfg.label;
}

/// fig2: one sensor, r in {0.1, 0.3, 0.5}. fig3: r = 0.5, N in {1, 2, 3}.
/// Both use n = 20, signal_var = 1, noise_std = 1e-2 and 20000 trials.
inline std::vector<RunConfig> expand_preset(std::string_view name) {
    RunConfig base;
    base.params.n = 20;
    base.params.signal_var = 1.0;
    base.params.noise_var = 1e-2 * 1e-2;
    base.trials = 20000;
    std::vector<RunConfig> out;
    if (name == "fig2") {
        constexpr std::pair<double, const char*> kCorrelations[] = {{0.1, "0.1"}, {0.3, "0.3"}, {0.5, "0.5"}};
        for (const auto& [r, tag] : kCorrelations) {
            auto cfg = base;
            cfg.params.r = r;
            cfg.params.num_sensors = 1;
            cfg.label = std::string("fig2_r") + tag;
            out.push_back(cfg);
        }
    } else if (name == "fig3") {
        for (std::size_t sensors : {std::size_t{1}, std::size_t{2}, std::size_t{3}}) {
            auto cfg = base;
            cfg.params.r = 0.5;
            cfg.params.num_sensors = sensors;
            cfg.label = "fig3_N" + std::to_string(sensors);
            out.push_back(cfg);
        }
    } else {
        throw InvalidConfig("unknown preset '" + std::string(name) + "' (expected fig2 or fig3)");
    }
    return out;
}

inline constexpr std::string_view kRocCsvHeader = "eta,pfa_emp,pd_emp,pfa_theory,pd_theory,pfa_exact,mode";
inline constexpr std::string_view kNegativeVarianceFlag = "NEGATIVE_VARIANCE";

/// One row per threshold. A non-positive H1 variance is written as the
/// NEGATIVE_VARIANCE flag in the pd_theory cell.
inline std::string roc_csv(const TheoryComparison& cmp) {
    std::string out(kRocCsvHeader);
    out += '\n';
    const std::string mode(to_string(cmp.mode));
    for (const auto& row : cmp.rows) {
        out += format_float(row.eta) + ',' + format_float(row.pfa_emp) + ',' +
               format_float(row.pd_emp) + ',' + format_float(row.pfa_theory) + ',' +
               (row.pd_theory ? format_float(*row.pd_theory) : std::string(kNegativeVarianceFlag)) +
               ',' + format_float(row.pfa_exact) + ',' + mode + '\n';
    }
    return out;
}

inline nlohmann::json to_json(const ModelParams& p) {
    return {{"n", p.n},
            {"num_sensors", p.num_sensors},
            {"signal_var", p.signal_var},
            {"r", p.r},
            {"noise_var", p.noise_var},
            {"noise_std", std::sqrt(p.noise_var)}};
}

inline nlohmann::json to_json(const RunConfig& c) {
    return {{"label", label_of(c)},
            {"params", to_json(c.params)},
            {"trials", c.trials},
            {"master_seed", c.master_seed},
            {"thresholds", resolved_thresholds(c)},
            {"theory_mode", std::string(to_string(c.theory_mode))}};
}

/// Inverse of to_json(RunConfig). noise_var is read directly so replay is exact.
inline RunConfig config_from_json(const nlohmann::json& j) {
    try {
        RunConfig c;
        c.label = j.at("label").get<std::string>();
        const auto& p = j.at("params");
        c.params.n = p.at("n").get<std::size_t>();
        c.params.num_sensors = p.at("num_sensors").get<std::size_t>();
        c.params.signal_var = p.at("signal_var").get<double>();
        c.params.r = p.at("r").get<double>();
        c.params.noise_var = p.at("noise_var").get<double>();
        c.trials = j.at("trials").get<std::size_t>();
        c.master_seed = j.at("master_seed").get<std::uint64_t>();
        c.thresholds = j.at("thresholds").get<std::vector<double>>();
        c.theory_mode = parse_mode(j.at("theory_mode").get<std::string>());
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig(std::string("malformed manifest entry: ") + e.what());
    }
}

inline nlohmann::json to_json(const RunManifest& m) {
    nlohmann::json configs = nlohmann::json::array();
    for (const auto& c : m.configs) configs.push_back(to_json(c));
    return {{"version", m.version},
            {"rng_scheme", m.rng_scheme},
            {"sigma_interpretation", m.sigma_interpretation},
            {"wall_seconds", m.wall_seconds},
            {"configs", configs},
            {"trials_per_hypothesis",
             [&] {
                 nlohmann::json t = nlohmann::json::object();
                 for (const auto& c : m.configs) t[label_of(c)] = {{"H0", c.trials}, {"H1", c.trials}};
                 return t;
             }()}};
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
    RunManifest m;
    try {
        m.version = j.at("version").get<std::string>();
        m.rng_scheme = j.at("rng_scheme").get<std::string>();
        for (const auto& c : j.at("configs")) m.configs.push_back(config_from_json(c));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig(std::string("malformed manifest: ") + e.what());
    }
    if (m.rng_scheme != kRngScheme)
        throw InvalidConfig("manifest was produced with a different RNG scheme: " + m.rng_scheme);
    return m;
}

inline RunManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot read manifest '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig("manifest is not valid JSON: " + std::string(e.what()));
    }
    return manifest_from_json(j);
}

namespace detail {

inline nlohmann::json moments_json(const TheoryMoments& m) {
    return {{"mean", m.mean}, {"variance", m.variance}};
}

inline nlohmann::json optional_json(const std::optional<double>& x) {
    return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

}  // namespace detail

/// Full JSON curve: empirical rates, exact H0 rates, and both theory modes.
inline nlohmann::json roc_json(const RunConfig& cfg, const TheoryComparison& paper,
                               const TheoryComparison& consistent) {
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t i = 0; i < consistent.rows.size(); ++i) {
        const auto& c = consistent.rows[i];
        const auto& p = paper.rows[i];
        points.push_back({{"eta", c.eta},
                          {"pfa_emp", c.pfa_emp},
                          {"pd_emp", c.pd_emp},
                          {"pfa_exact", c.pfa_exact},
                          {"consistent", {{"pfa", c.pfa_theory}, {"pd", detail::optional_json(c.pd_theory)}}},
                          {"paper",
                           {{"pfa", p.pfa_theory},
                            {"pd", detail::optional_json(p.pd_theory)},
                            {"flag", p.negative_variance() ? kNegativeVarianceFlag : "ok"}}},
                          {"hybrid", {{"pfa", c.pfa_exact}, {"pd", detail::optional_json(c.pd_theory)}}}});
    }
    return {{"label", label_of(cfg)},
            {"config", to_json(cfg)},
            {"direction", std::string(to_string(consistent.direction))},
            {"trials", consistent.trials},
            {"p", consistent.agreement.p},
            {"rho", consistent.agreement.rho},
            {"moments",
             {{"H0", detail::moments_json(consistent.h0)},
              {"H1_consistent", detail::moments_json(consistent.h1)},
              {"H1_paper", detail::moments_json(paper.h1)}}},
            {"points", points}};
}

inline constexpr std::string_view kTheoryCsvHeader =
    "mode,eta,p,rho,mean_h0,var_h0,mean_h1,var_h1,pfa_theory,pd_theory,pfa_exact,flag";

struct TheoryRow {
    TheoryMode mode = TheoryMode::Consistent;
    double eta = 0.0;
    AgreementProb agreement;
    TheoryMoments h0;
    TheoryMoments h1;
    double pfa_theory = 0.0;
    std::optional<double> pd_theory;
    double pfa_exact = 0.0;
};

/// Both theory modes at every threshold, without simulation.
inline std::vector<TheoryRow> theory_table(const RunConfig& cfg) {
    validate_config(cfg);
    const auto agree = agreement_prob(cfg.params);
    const auto dir = roc_direction(cfg.params);
    std::vector<TheoryRow> rows;
    for (auto mode : {TheoryMode::PaperLiteral, TheoryMode::Consistent}) {
        const auto h0 = moments(cfg.params, Hypothesis::H0, mode, agree);
        const auto h1 = moments(cfg.params, Hypothesis::H1, mode, agree);
        for (double eta : resolved_thresholds(cfg)) {
            TheoryRow row{mode, eta, agree, h0, h1, gaussian_fire_prob(h0, eta, dir), std::nullopt,
                          exact_h0_pfa(cfg.params, eta, dir)};
            if (h1.variance > 0.0) row.pd_theory = gaussian_fire_prob(h1, eta, dir);
            rows.push_back(row);
        }
    }
    return rows;
}

inline std::string theory_csv(const std::vector<TheoryRow>& rows) {
    std::string out(kTheoryCsvHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += std::string(to_string(r.mode)) + ',' + format_float(r.eta) + ',' +
               format_float(r.agreement.p) + ',' + format_float(r.agreement.rho) + ',' +
               format_float(r.h0.mean) + ',' + format_float(r.h0.variance) + ',' +
               format_float(r.h1.mean) + ',' + format_float(r.h1.variance) + ',' +
               format_float(r.pfa_theory) + ',' + (r.pd_theory ? format_float(*r.pd_theory) : "") +
               ',' + format_float(r.pfa_exact) + ',' +
               (r.pd_theory ? "ok" : std::string(kNegativeVarianceFlag)) + '\n';
    }
    return out;
}

inline nlohmann::json theory_json(const RunConfig& cfg, const std::vector<TheoryRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"mode", std::string(to_string(r.mode))},
                       {"eta", r.eta},
                       {"mean_h0", r.h0.mean},
                       {"var_h0", r.h0.variance},
                       {"mean_h1", r.h1.mean},
                       {"var_h1", r.h1.variance},
                       {"pfa_theory", r.pfa_theory},
                       {"pd_theory", detail::optional_json(r.pd_theory)},
                       {"pfa_exact", r.pfa_exact},
                       {"flag", r.pd_theory ? "ok" : kNegativeVarianceFlag}});
    }
    const auto agree = rows.empty() ? AgreementProb{} : rows.front().agreement;
    return {{"label", label_of(cfg)},
            {"config", to_json(cfg)},
            {"p", agree.p},
            {"rho", agree.rho},
            {"rows", arr}};
}

}  // namespace onebit
