// fastpoints: dyadic-grid experiments on exceptional points of Brownian-type
// paths.  Subcommands: run (execute a preset, emit CSV), validate (check a
// configuration and report effective settings), dims (closed-form dimension
// table for the configured parameters).
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fastpoints/errors.hpp"
#include "fastpoints/experiment.hpp"
#include "fastpoints/parallel.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string preset;
    std::string seed;
    std::string paths;
    std::string levels;
    std::string a;
    std::string epsilon;
    std::string drift;
    std::string hurst;
    std::string out;
    std::string workers;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_path,
                    "Configuration file of key = value lines");
    cmd->add_option("--preset", opt.preset, "Experiment preset name");
    cmd->add_option("--seed", opt.seed,
                    "Master seed (default: FASTPOINTS_SEED env or 20260822)");
    cmd->add_option("--paths", opt.paths, "Number of Monte Carlo paths");
    cmd->add_option("--levels", opt.levels, "Dyadic level range MIN:MAX");
    cmd->add_option("--a", opt.a, "Speed parameter a >= 0");
    cmd->add_option("--epsilon", opt.epsilon, "Threshold slack epsilon");
    cmd->add_option("--drift", opt.drift,
                    "Drift spec, e.g. zero | linear:c=1 | cantor:gamma=0.25,"
                    "depth=20 | loud:alpha=0.4,A=2,terms=24 | table:FILE");
    cmd->add_option("--hurst", opt.hurst, "Hurst index in (0,1) for fbm");
    cmd->add_option("--out", opt.out, "Output CSV path (default: stdout)");
    cmd->add_option("--workers", opt.workers,
                    "Worker thread count (0 = hardware); never changes output");
}

fastpoints::ConfigText collect_text(const CliOptions& opt) {
    fastpoints::ConfigText text;
    if (!opt.config_path.empty())
        text = fastpoints::load_config_file(opt.config_path);
    const std::pair<const char*, const std::string*> overrides[] = {
        {"preset", &opt.preset},   {"seed", &opt.seed},
        {"paths", &opt.paths},     {"levels", &opt.levels},
        {"a", &opt.a},             {"epsilon", &opt.epsilon},
        {"drift", &opt.drift},     {"hurst", &opt.hurst},
        {"out", &opt.out},         {"workers", &opt.workers},
    };
    for (const auto& [key, value] : overrides)
        if (!value->empty()) fastpoints::apply_override(text, key, *value);
    return text;
}

int run_command(const CliOptions& opt) {
    const fastpoints::ExperimentConfig cfg =
        fastpoints::parse_config(collect_text(opt));
    fastpoints::run(cfg);
    return 0;
}

int validate_command(const CliOptions& opt) {
    const fastpoints::ValidationReport report =
        fastpoints::validate_config(collect_text(opt));
    for (const std::string& v : report.violations)
        std::cout << "violation: " << v << "\n";
    for (const std::string& n : report.notes) std::cout << "note: " << n << "\n";
    std::cout << (report.ok ? "OK\n" : "INVALID\n");
    return report.ok ? 0 : 3;
}

int dims_command(CliOptions opt) {
    opt.preset = "dims";
    return run_command(opt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Dyadic-grid estimators for fast points, zero sets, and drifted "
        "paths"};
    app.require_subcommand(1);

    CliOptions run_opt, validate_opt, dims_opt;
    CLI::App* cmd_run =
        app.add_subcommand("run", "Run an experiment preset and emit CSV");
    add_common_options(cmd_run, run_opt);
    CLI::App* cmd_validate = app.add_subcommand(
        "validate", "Validate a configuration without running it");
    add_common_options(cmd_validate, validate_opt);
    CLI::App* cmd_dims = app.add_subcommand(
        "dims", "Print the closed-form dimension table as CSV");
    add_common_options(cmd_dims, dims_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_run->parsed()) return run_command(run_opt);
        if (cmd_validate->parsed()) return validate_command(validate_opt);
        if (cmd_dims->parsed()) return dims_command(dims_opt);
        std::cerr << "error: no subcommand given\n";
        return 2;
    } catch (const fastpoints::usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const fastpoints::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const fastpoints::resolution_error& e) {
        std::cerr << "resolution error: " << e.what() << "\n";
        return 3;
    } catch (const fastpoints::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
