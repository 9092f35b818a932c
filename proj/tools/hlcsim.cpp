#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hyperlc/scenarios.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw hlc::ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Path to the JSON configuration")
        ->required();
    cmd->add_option("--out", args.out_dir, "Output directory (overrides the config)");
    cmd->add_option_function<std::uint64_t>(
        "--seed",
        [&args](const std::uint64_t& s) {
            args.seed = s;
            args.seed_set = true;
        },
        "Seed override for initial data");
}

hlc::RunConfig load(const CommonArgs& args, const std::string& scenario) {
    hlc::RunConfig cfg = hlc::parse_config(slurp(args.config_path));
    cfg.scenario = scenario;
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    if (args.seed_set) cfg.initial_data.seed = args.seed;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral simulator and operator-verification toolkit for the "
                 "hyperbolic Ericksen-Leslie liquid crystal system"};
    app.require_subcommand(1);

    CommonArgs sim_args, vop_args, vdec_args, xchk_args;
    CLI::App* sim = app.add_subcommand("simulate", "Time integration with diagnostics");
    add_common(sim, sim_args);
    CLI::App* vop = app.add_subcommand("verify-operators", "Multiplier-operator identity suite");
    add_common(vop, vop_args);
    CLI::App* vdec = app.add_subcommand("verify-decay", "Decay-law measurements");
    add_common(vdec, vdec_args);
    CLI::App* xchk = app.add_subcommand("cross-check",
                                        "Director-versus-angle formulation comparison");
    add_common(xchk, xchk_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return hlc::cmd_simulate(load(sim_args, "simulate"));
        if (vop->parsed()) return hlc::cmd_verify_operators(load(vop_args, "verify-operators"));
        if (vdec->parsed()) return hlc::cmd_verify_decay(load(vdec_args, "verify-decay"));
        if (xchk->parsed()) return hlc::cmd_cross_check(load(xchk_args, "cross-check"));
    } catch (const hlc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return hlc::exit_config_error;
    } catch (const hlc::Error& e) {
        const std::string what = e.what();
        std::cerr << "error: " << what << "\n";
        if (what.find("diverged") != std::string::npos) return hlc::exit_divergence;
        return hlc::exit_verification_failure;
    }
    return hlc::exit_config_error;
}
