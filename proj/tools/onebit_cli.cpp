// onebit: ROC simulation, closed-form theory tables and the oracle suite for
// the one-bit agreement-count detector.
//
// Exit codes: 0 ok, 1 validation check failure, 2 usage or configuration error.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "onebit/commands.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

/// ONEBIT_WORKERS overrides the worker count; 0 means all hardware threads.
std::size_t workers_from_env(std::size_t fallback) {
    const char* env = std::getenv("ONEBIT_WORKERS");
    if (env == nullptr || *env == '\0') return fallback;
    try {
        return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::exception&) {
        throw onebit::InvalidConfig(std::string("ONEBIT_WORKERS is not an integer: ") + env);
    }
}

struct RawOptions {
    std::string preset;
    std::string config;
    std::string manifest;
    std::string out;
    std::string format = "csv";
    std::string mode;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
};

void add_run_flags(CLI::App* cmd, RawOptions& raw) {
    cmd->add_option("--preset", raw.preset, "Experiment preset")->check(CLI::IsMember({"fig2", "fig3"}));
    cmd->add_option("--config", raw.config, "Key-value run config file");
    cmd->add_option("--manifest", raw.manifest, "Replay every config recorded in a manifest.json");
    cmd->add_option("--out", raw.out, "Output directory")->required();
    cmd->add_option("--format", raw.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--trials", raw.trials, "Trials per hypothesis (overrides config)");
    cmd->add_option("--seed", raw.seed, "Master seed (overrides config)");
    cmd->add_option("--mode", raw.mode, "Theory mode for CSV curves")
        ->check(CLI::IsMember({"paper", "consistent"}));
}

onebit::CommandOptions to_options(const CLI::App* cmd, const RawOptions& raw) {
    onebit::CommandOptions o;
    if (cmd->count("--preset")) o.source.preset = raw.preset;
    if (cmd->count("--config")) o.source.config_path = raw.config;
    if (cmd->count("--manifest")) o.source.manifest_path = raw.manifest;
    if (cmd->count("--trials")) o.overrides.trials = raw.trials;
    if (cmd->count("--seed")) o.overrides.seed = raw.seed;
    if (cmd->count("--mode")) o.overrides.mode = onebit::parse_mode(raw.mode);
    o.overrides.workers = workers_from_env(0);
    o.out_dir = raw.out;
    o.format = onebit::parse_format(raw.format);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"One-bit spectrum sensing: agreement-count detector toolkit"};
    app.require_subcommand(1);

    RawOptions roc_raw;
    auto* roc = app.add_subcommand("roc", "Monte Carlo ROC curves with theory and exact-H0 columns");
    add_run_flags(roc, roc_raw);

    RawOptions theory_raw;
    auto* theory = app.add_subcommand("theory", "Closed-form moments and CLT rates for both theory modes");
    add_run_flags(theory, theory_raw);

    std::string validate_out;
    bool quick = false;
    auto* validate = app.add_subcommand("validate", "Run the built-in oracle suite");
    validate->add_option("--out", validate_out, "Directory for validation_report.txt")->required();
    validate->add_flag("--quick", quick, "Use 2000 trials per seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*roc) {
            onebit::cmd_roc(to_options(roc, roc_raw), std::cout);
        } else if (*theory) {
            onebit::cmd_theory(to_options(theory, theory_raw), std::cout);
        } else if (*validate) {
            auto vopts = quick ? onebit::quick_validation_options() : onebit::ValidationOptions{};
            vopts.workers = workers_from_env(0);
            return onebit::cmd_validate(validate_out, vopts, std::cout) ? kExitOk : kExitCheckFailure;
        }
    } catch (const onebit::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}
