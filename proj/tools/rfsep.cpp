#include <cstdlib>
#include <iostream>

#include <omp.h>

#include "CLI11.hpp"
#include "commands.hpp"
#include "rfsep/types.hpp"

using namespace rfsep;

int main(int argc, char** argv) {
    CLI::App app{"Single-channel RF source separation with smoothed analytical scores.\n\n"
                 "Exit codes: 0 success, 2 validation error, 3 numerical failure.\n" +
                 cli::help_keys()};
    app.require_subcommand(1);
    cli::Common common;
    auto add_common = [&](CLI::App* s) {
        s->add_option("--config", common.config_path, "key = value config file");
        s->add_option("--seed", common.seed, "master seed (overrides config)")->each([&](const std::string&) {
            common.seed_set = true;
        });
        s->add_option("--out-dir", common.out_dir, "output directory")->capture_default_str();
        s->add_flag("--full", common.full, "full-scale trials and iterations");
        s->add_option("--threads", common.threads, "worker threads (default: RFSEP_THREADS, else OpenMP default)");
    };

    bool binary = false;
    auto* gen = app.add_subcommand("gen", "synthesize s, b and y = s + kappa*b");
    add_common(gen);
    gen->add_flag("--binary", binary, "also write little-endian float64 .bin files");

    std::string mixture_file, meta_file, truth_file;
    auto* sepc = app.add_subcommand("separate", "run alpha-RGS on one mixture");
    add_common(sepc);
    sepc->add_option("--mixture", mixture_file, "mixture signal (.csv or .bin)")->required();
    sepc->add_option("--meta", meta_file, "meta.json written by gen (kappa, interference offset/phase)")->required();
    sepc->add_option("--truth", truth_file, "true SOI signal, enables the MSE trace column");

    std::vector<double> sirs;
    int trials = 0;
    std::vector<std::string> methods;
    bool no_timing = false;
    auto* sweep = app.add_subcommand("sweep", "SIR sweep over methods; writes sweep.csv");
    add_common(sweep);
    sweep->add_option("--sir", sirs, "SIR points in dB (overrides config)")->allow_extra_args(false);
    sweep->add_option("--trials", trials, "trials per SIR (overrides config)");
    sweep->add_option("--methods", methods, "methods (overrides config)")->delimiter(',');
    sweep->add_flag("--no-timing", no_timing, "write wall_ms = 0 so CSVs are byte-reproducible");

    std::vector<double> asirs;
    int atrials = 0;
    bool ano_timing = false;
    auto* abl = app.add_subcommand("ablation", "omega/kappa^2 ablation of alpha-RGS; writes ablation.csv");
    add_common(abl);
    abl->add_option("--sir", asirs, "SIR points in dB (overrides config)")->allow_extra_args(false);
    abl->add_option("--trials", atrials, "trials per point (overrides config)");
    abl->add_flag("--no-timing", ano_timing, "write wall_ms = 0");

    std::string which;
    auto* land = app.add_subcommand("landscape", "1-D smoothed loss landscapes; writes landscape_<case>.csv");
    add_common(land);
    land->add_option("--case", which, "bpsk | gmm4 | toy (overrides config)");

    std::string fixtures, dump;
    auto* sc = app.add_subcommand("score-check", "compare analytical scores with the finite-difference oracle");
    add_common(sc);
    sc->add_option("--fixtures", fixtures, "compare against x,score fixture CSVs in this directory");
    sc->add_option("--dump-fixtures", dump, "write oracle fixtures to this directory");

    auto* cov = app.add_subcommand("cov", "write the interference covariance C_bb to c_bb.bin");
    add_common(cov);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (common.threads <= 0) {
        if (const char* env = std::getenv("RFSEP_THREADS")) common.threads = std::atoi(env);
    }
    if (common.threads > 0) omp_set_num_threads(common.threads);

    try {
        if (*gen) return cli::cmd_gen(common, binary);
        if (*sepc) return cli::cmd_separate(common, mixture_file, meta_file, truth_file);
        if (*sweep) return cli::cmd_sweep(common, sirs, trials, methods, no_timing);
        if (*abl) return cli::cmd_ablation(common, asirs, atrials, ano_timing);
        if (*land) return cli::cmd_landscape(common, which);
        if (*sc) return cli::cmd_score_check(common, fixtures, dump);
        if (*cov) return cli::cmd_cov(common);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
