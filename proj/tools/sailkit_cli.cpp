#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sailkit/harness/experiments.hpp"

namespace {

std::string default_problem(sailkit::ExperimentKind kind) {
    using sailkit::ExperimentKind;
    switch (kind) {
    case ExperimentKind::MapElites: return "rastrigin-2d";
    case ExperimentKind::Fig5: return "ackley-1d";
    case ExperimentKind::Sail:
    case ExperimentKind::Fig6:
    case ExperimentKind::Bakeoff: return "foil-proxy";
    }
    return "rastrigin-2d";
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "run";
    std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "Run configuration file");
    cmd->add_option("--seed", opts.seed, "Seed override (takes precedence over the config)");
    cmd->add_option("--out", opts.out_dir, "Output directory");
}

int run_kind(sailkit::ExperimentKind kind, const CommonOpts& opts) {
    sailkit::RunConfig cfg;
    if (!opts.config_path.empty()) {
        cfg = sailkit::RunConfig::parse_file(opts.config_path);
    } else {
        cfg.problem = default_problem(kind);
    }
    cfg.experiment = kind;
    if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
    sailkit::run_experiment(cfg, opts.out_dir);
    std::cout << "wrote " << opts.out_dir << "/manifest.json\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quality-diversity illumination and surrogate toolkit"};
    app.require_subcommand(1);

    CommonOpts me_opts, sail_opts, fig5_opts, fig6_opts, bake_opts;
    auto* me = app.add_subcommand("map-elites", "Plain illumination run");
    add_common(me, me_opts);
    auto* sl = app.add_subcommand("sail", "Surrogate-assisted illumination run");
    add_common(sl, sail_opts);
    auto* f5 = app.add_subcommand("fig5", "Surrogate-assisted hill-climber study");
    add_common(f5, fig5_opts);
    auto* f6 = app.add_subcommand("fig6", "Segmentation / dimensionality study");
    add_common(f6, fig6_opts);
    auto* bk = app.add_subcommand("bakeoff", "Model training/prediction bake-off");
    add_common(bk, bake_opts);

    std::string export_dir;
    auto* ex = app.add_subcommand("export", "Verify a run directory against its manifest");
    ex->add_option("--out", export_dir, "Run directory to verify")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        using sailkit::ExperimentKind;
        if (me->parsed()) return run_kind(ExperimentKind::MapElites, me_opts);
        if (sl->parsed()) return run_kind(ExperimentKind::Sail, sail_opts);
        if (f5->parsed()) return run_kind(ExperimentKind::Fig5, fig5_opts);
        if (f6->parsed()) return run_kind(ExperimentKind::Fig6, fig6_opts);
        if (bk->parsed()) return run_kind(ExperimentKind::Bakeoff, bake_opts);
        if (ex->parsed()) {
            const auto problems = sailkit::verify_manifest(export_dir);
            if (problems.empty()) {
                std::cout << "manifest verified: " << export_dir << "\n";
                return 0;
            }
            for (const auto& p : problems) std::cerr << p << "\n";
            return 2;
        }
    } catch (const sailkit::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
