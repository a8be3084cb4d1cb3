#pragma once

// Subcommand bodies for the `onebit` tool. Each throws onebit::Error on bad
// configuration or I/O; the tool maps exceptions to exit codes.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "onebit/io.hpp"
#include "onebit/montecarlo.hpp"
#include "onebit/validation.hpp"

namespace onebit {

enum class OutputFormat { Csv, Json };

inline OutputFormat parse_format(std::string_view s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw InvalidConfig("format must be 'csv' or 'json', got '" + std::string(s) + "'");
}

struct RunSource {
    std::optional<std::string> preset;
    std::optional<std::string> config_path;
    std::optional<std::string> manifest_path;
};

struct RunOverrides {
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<TheoryMode> mode;
    std::size_t workers = 1;
};

struct CommandOptions {
    RunSource source;
    RunOverrides overrides;
    std::filesystem::path out_dir;
    OutputFormat format = OutputFormat::Csv;
};

inline constexpr std::string_view kManifestName = "manifest.json";

/// Expands the source into validated configs with overrides applied.
inline std::vector<RunConfig> resolve_configs(const RunSource& src, const RunOverrides& ov) {
    const int given = int(src.preset.has_value()) + int(src.config_path.has_value()) +
                      int(src.manifest_path.has_value());
    if (given != 1) throw InvalidConfig("exactly one of --preset, --config, --manifest is required");
    std::vector<RunConfig> configs;
    if (src.preset) configs = expand_preset(*src.preset);
    if (src.config_path) configs.push_back(load_config(*src.config_path));
    if (src.manifest_path) configs = load_manifest(*src.manifest_path).configs;
    for (auto& c : configs) {
        if (ov.trials) c.trials = *ov.trials;
        if (ov.seed) c.master_seed = *ov.seed;
        if (ov.mode) c.theory_mode = *ov.mode;
        c.workers = ov.workers;
        validate_config(c);
    }
    return configs;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

inline void prepare_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

/// Simulates every config and writes one curve file each plus manifest.json.
inline std::vector<std::filesystem::path> cmd_roc(const CommandOptions& opts, std::ostream& log) {
    const auto configs = resolve_configs(opts.source, opts.overrides);
    prepare_dir(opts.out_dir);
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::filesystem::path> written;
    for (const auto& cfg : configs) {
        const auto empirical = estimate_rates(cfg);
        const std::string stem = label_of(cfg);
        std::filesystem::path file;
        if (opts.format == OutputFormat::Csv) {
            file = opts.out_dir / (stem + ".csv");
            write_text(file, roc_csv(compare_theory(cfg, empirical, cfg.theory_mode)));
        } else {
            file = opts.out_dir / (stem + ".json");
            const auto paper = compare_theory(cfg, empirical, TheoryMode::PaperLiteral);
            const auto consistent = compare_theory(cfg, empirical, TheoryMode::Consistent);
            write_text(file, roc_json(cfg, paper, consistent).dump(2) + '\n');
        }
        log << "wrote " << file.string() << '\n';
        written.push_back(file);
    }
    RunManifest manifest;
    manifest.configs = configs;
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto mpath = opts.out_dir / kManifestName;
    write_text(mpath, to_json(manifest).dump(2) + '\n');
    log << "wrote " << mpath.string() << '\n';
    written.push_back(mpath);
    return written;
}

/// Closed-form tables for both theory modes; no simulation.
inline std::vector<std::filesystem::path> cmd_theory(const CommandOptions& opts, std::ostream& log) {
    const auto configs = resolve_configs(opts.source, opts.overrides);
    prepare_dir(opts.out_dir);
    std::vector<std::filesystem::path> written;
    for (const auto& cfg : configs) {
        const auto rows = theory_table(cfg);
        const std::string stem = label_of(cfg) + "_theory";
        std::filesystem::path file;
        if (opts.format == OutputFormat::Csv) {
            file = opts.out_dir / (stem + ".csv");
            write_text(file, theory_csv(rows));
        } else {
            file = opts.out_dir / (stem + ".json");
            write_text(file, theory_json(cfg, rows).dump(2) + '\n');
        }
        log << "wrote " << file.string() << '\n';
        written.push_back(file);
    }
    RunManifest manifest;
    manifest.configs = configs;
    const auto mpath = opts.out_dir / kManifestName;
    write_text(mpath, to_json(manifest).dump(2) + '\n');
    written.push_back(mpath);
    return written;
}

/// Runs the oracle suite, writes validation_report.txt, returns true iff all pass.
inline bool cmd_validate(const std::filesystem::path& out_dir, const ValidationOptions& vopts,
                         std::ostream& log) {
    const auto results = run_oracle_suite(vopts);
    const auto report = format_report(results);
    prepare_dir(out_dir);
    write_text(out_dir / "validation_report.txt", report);
    log << report;
    return all_passed(results);
}

}  // namespace onebit
