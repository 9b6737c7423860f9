#include "chx/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <map>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"spectral toolkit experiment runner"};
    app.require_subcommand(1);

    struct Opts {
        std::string config;
        std::string out;
        std::uint64_t seed = 0;
        bool seed_set = false;
        int mc = 0;
        bool mc_set = false;
    };
    std::map<std::string, Opts> opts;
    for (const std::string& name : chx::experiment_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        Opts& o = opts[name];
        sub->add_option("--config", o.config, "json config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory (overrides config)");
        sub->add_option("--seed", o.seed, "seed override")->each([&o](const std::string&) { o.seed_set = true; });
        sub->add_option("--mc", o.mc, "Monte Carlo count override")->each([&o](const std::string&) { o.mc_set = true; });
    }

    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    const Opts& o = opts[name];
    try {
        chx::ExperimentConfig cfg = chx::load_config(o.config);
        if (cfg.experiment != name) {
            std::fprintf(stderr, "config names experiment '%s' but subcommand is '%s'\n",
                         cfg.experiment.c_str(), name.c_str());
            return 2;
        }
        if (!o.out.empty()) cfg.out_dir = o.out;
        if (o.seed_set) cfg.seed = o.seed;
        if (o.mc_set) cfg.mc = o.mc;
        const chx::RunManifest man = chx::run(cfg);
        for (const auto& [k, v] : man.stats) std::printf("%s = %s\n", k.c_str(), v.c_str());
        std::printf("%s: %s\n", name.c_str(), man.pass ? "PASS" : "FAIL");
        std::printf("series: %s\nmanifest: %s\n", man.series_path.c_str(), man.manifest_path.c_str());
        return man.pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
