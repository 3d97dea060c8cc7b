// seadvr — reconstruct underwater acoustic wavefields from vertical-array
// samples via a discrete variable representation basis.
//
// Subcommands mirror the experiment runners; every run is driven by a plain
// text config file, with --seed/--out-dir/--threads overrides.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-resolution error.
#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "seadvr/config.hpp"
#include "seadvr/experiment.hpp"

namespace {

struct GlobalArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int threads = 0;
    bool have_seed = false;
};

seadvr::ExperimentConfig load_config(const GlobalArgs& args) {
    std::ifstream in(args.config_path);
    if (!in)
        throw seadvr::config_error("cannot open config file: " + args.config_path);
    auto cfg = seadvr::parse_config(in);
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.have_seed) cfg.seed = args.seed;
    if (args.threads > 0) cfg.threads = args.threads;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DVR-based underwater acoustic wavefield reconstruction"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalArgs args;
    app.add_option("--config", args.config_path, "experiment config file")->required();
    app.add_option("--out-dir", args.out_dir, "output directory override");
    auto* seed_opt = app.add_option("--seed", args.seed, "RNG seed override");
    app.add_option("--threads", args.threads, "worker thread count override");

    auto* cmd_modes = app.add_subcommand("modes", "solve normal modes, dump k_rm/alpha/shapes");
    auto* cmd_dvr = app.add_subcommand("dvr-dump", "dump DVR grid depths and chi_j curves");
    auto* cmd_cw = app.add_subcommand("cw", "dump a CW field depth profile");
    auto* cmd_pulse = app.add_subcommand("pulse", "synthesize and dump a pulse arrival pattern");
    auto* cmd_sweep_f = app.add_subcommand("sweep-frequency", "fidelity vs frequency sweep");
    auto* cmd_sweep_s = app.add_subcommand("sweep-spacing", "pulse fidelity vs array spacing");
    auto* cmd_profile = app.add_subcommand("profile-compare",
                                           "exact vs reconstructed profiles at one frequency");
    auto* cmd_mc = app.add_subcommand("monte-carlo", "noise/displacement fidelity statistics");

    CLI11_PARSE(app, argc, argv);
    args.have_seed = seed_opt->count() > 0;

    try {
        auto cfg = load_config(args);
        std::string path;
        if (cmd_modes->parsed()) path = seadvr::run_dump_modes(cfg);
        else if (cmd_dvr->parsed()) path = seadvr::run_dump_dvr(cfg);
        else if (cmd_cw->parsed()) path = seadvr::run_dump_cw(cfg);
        else if (cmd_pulse->parsed()) path = seadvr::run_dump_pulse(cfg);
        else if (cmd_sweep_f->parsed()) path = seadvr::run_sweep_frequency(cfg);
        else if (cmd_sweep_s->parsed()) path = seadvr::run_sweep_spacing(cfg);
        else if (cmd_profile->parsed()) path = seadvr::run_profile_compare(cfg);
        else if (cmd_mc->parsed()) path = seadvr::run_monte_carlo(cfg);
        std::cout << "wrote " << path << "\n";
        return 0;
    } catch (const seadvr::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const seadvr::resolution_error& e) {
        std::cerr << "resolution error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
