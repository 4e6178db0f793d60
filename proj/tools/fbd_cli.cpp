#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fbd/commands.hpp"

namespace {

struct Flags {
    std::string config;
    std::string out = ".";
    bool strict = false;
    std::optional<std::uint64_t> seed;
};

void add_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "experiment file (INI); the reference preset when omitted");
    sub->add_option("--out", f.out, "output directory")->capture_default_str();
    sub->add_flag("--strict", f.strict, "refuse initial data that is not admissible (exit 2)");
    sub->add_option("--seed", f.seed, "seed for randomized diagnostics");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-discrete single-interface scheme for bilinear forward-backward diffusion"};
    app.require_subcommand(1);
    Flags flags;
    CLI::App* simulate = app.add_subcommand("simulate", "run the scheme; interface, snapshots, diagnostics");
    CLI::App* decompose = app.add_subcommand("decompose", "fluctuation decomposition at [decompose] times");
    CLI::App* sweep = app.add_subcommand("sweep", "convergence diagnostics over [sweep] eps2 values");
    CLI::App* kernel = app.add_subcommand("kernelcheck", "kernel gap table and B_n integrals");
    for (CLI::App* sub : {simulate, decompose, sweep, kernel}) add_flags(sub, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return fbd::kExitConfig;
    }

    fbd::ExperimentConfig cfg;
    try {
        cfg = flags.config.empty() ? fbd::preset_reference() : fbd::load_config(flags.config);
        if (flags.strict) cfg.strict = true;
        if (flags.seed) cfg.seed = *flags.seed;
    } catch (const fbd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return fbd::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return fbd::kExitConfig;
    }

    try {
        if (*simulate) return fbd::cmd_simulate(cfg, flags.out, std::cerr);
        if (*decompose) return fbd::cmd_decompose(cfg, flags.out, std::cerr);
        if (*sweep) return fbd::cmd_sweep(cfg, flags.out, std::cerr);
        return fbd::cmd_kernelcheck(cfg, flags.out, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return fbd::kExitSolver;
    }
}
