// ergotrope: experiment runner for the finite-volume spectral laboratory.
//
//   ergotrope <subcommand> --config <path> [--seed N] [--jobs K] [--out DIR]
//
// Subcommands mirror the experiments: entropy-scaling, projection-decay,
// lyapunov-scan, large-deviation, maryland-verify, subshift-stats; `validate`
// just checks a config.  Exit codes: 0 ok, 2 config error, 3 runtime failure.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "ergotrope/harness/config.hpp"
#include "ergotrope/harness/experiments.hpp"

namespace eh = ergotrope::harness;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    int jobs = 0;
};

int run_experiment(eh::Experiment exp, const CommonOpts& opts, bool validate_only) {
    eh::ExperimentConfig cfg;
    try {
        cfg = eh::load_config(opts.config_path);
    } catch (const eh::ConfigError& ex) {
        std::fprintf(stderr, "%s\n", ex.what());
        return 2;
    }
    if (!validate_only && cfg.experiment != exp) {
        std::fprintf(stderr, "config declares experiment '%s' but subcommand asked for '%s'\n",
                     eh::to_string(cfg.experiment).c_str(), eh::to_string(exp).c_str());
        return 2;
    }
    if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
    if (opts.jobs > 0) cfg.jobs = opts.jobs;
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    if (validate_only) {
        std::printf("config ok: experiment %s\n", eh::to_string(cfg.experiment).c_str());
        return 0;
    }
    try {
        auto manifest = eh::run(cfg);
        std::printf("%s: %lld tasks, %.2f s, %zu artifacts in %s\n",
                    eh::to_string(cfg.experiment).c_str(),
                    static_cast<long long>(manifest.tasks), manifest.wall_clock_sec,
                    manifest.outputs.size(), cfg.out_dir.c_str());
        return 0;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "run failed: %s\n", ex.what());
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ergotrope: ergodic Schroedinger operators and free-fermion entanglement at desk scale"};
    app.require_subcommand(1);

    struct Sub {
        eh::Experiment exp;
        CLI::App* cmd;
        CommonOpts opts;
    };
    std::vector<Sub> subs;
    auto add = [&](eh::Experiment exp, const char* help) {
        auto* cmd = app.add_subcommand(eh::to_string(exp), help);
        subs.push_back({exp, cmd, {}});
        auto& opts = subs.back().opts;
        cmd->add_option("--config", opts.config_path, "config file (key = value lines)")
            ->required();
        cmd->add_option("--seed", opts.seed, "master seed override");
        cmd->add_option("--jobs", opts.jobs, "worker threads (default: hardware)");
        cmd->add_option("--out", opts.out_dir, "output directory override");
    };
    add(eh::Experiment::EntropyScaling, "Monte Carlo E{S_Lambda(L)} scaling table");
    add(eh::Experiment::ProjectionDecay, "E|P(0,n)| and E Q_I(0,n) with exponential fits");
    add(eh::Experiment::LyapunovScan, "gamma(lambda) over an energy grid");
    add(eh::Experiment::LargeDeviation, "tail probabilities of the cocycle growth");
    add(eh::Experiment::MarylandVerify, "exact Maryland pipeline against diagonalization");
    add(eh::Experiment::SubshiftStats, "Markov measure sanity statistics");

    CommonOpts vopts;
    auto* vcmd = app.add_subcommand("validate", "parse and validate a config, run nothing");
    vcmd->add_option("--config", vopts.config_path, "config file")->required();

    CLI11_PARSE(app, argc, argv);

    if (vcmd->parsed()) return run_experiment(eh::Experiment::EntropyScaling, vopts, true);
    for (auto& s : subs)
        if (s.cmd->parsed()) return run_experiment(s.exp, s.opts, false);
    return 2;
}
