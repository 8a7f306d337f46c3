#include <iostream>
#include <thread>

#include "CLI11.hpp"

#include "experiments.hpp"
#include "gph/errors.hpp"
#include "gph/version.hpp"
#include "registry.hpp"

int main(int argc, char** argv) {
    using namespace gph::cli;

    CLI::App app{"Geometric phase experiments"};
    app.set_version_flag("--version", std::string(gph::kLibraryName) + " " + gph::kLibraryVersion);
    app.require_subcommand(1);

    std::string config_path, output_dir;
    std::uint64_t seed = 0;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());

    CLI::App* run = app.add_subcommand("run", "run an experiment from a YAML or JSON config");
    run->add_option("config", config_path, "config file")->required();
    CLI::Option* seed_opt = run->add_option("--seed", seed, "master seed (overrides the config)");
    run->add_option("--threads", threads, "worker threads for ensembles")->check(CLI::PositiveNumber);
    run->add_option("--output-dir", output_dir, "output directory (default: $GPHASE_OUTPUT_DIR or ./gphase-output)");

    CLI::App* list = app.add_subcommand("list", "list experiments and their parameters");
    bool verbose = false;
    list->add_flag("-v,--verbose", verbose, "show parameters and defaults");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (list->parsed()) {
        for (const auto& e : experiment_registry()) {
            std::cout << e.name << "  [" << e.topic << "]  " << e.summary << "\n";
            if (!verbose) continue;
            for (const auto& p : e.params)
                std::cout << "    " << p.name << " = " << p.fallback.dump() << "  " << p.doc << "\n";
            std::cout << "    columns: ";
            for (std::size_t i = 0; i < e.columns.size(); ++i) std::cout << (i ? "," : "") << e.columns[i];
            std::cout << "\n";
        }
        return 0;
    }

    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const gph::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    if (*seed_opt) cfg.seed = seed;

    const std::string dir = resolve_output_dir(output_dir, cfg);
    const RunReport rep = execute(cfg, dir, threads);
    if (rep.exit_code == 1) std::cerr << "config error: " << rep.message << "\n";
    else if (rep.exit_code == 2) std::cerr << "error: " << rep.message << "\n";
    for (const auto& f : rep.files) std::cout << dir << "/" << f << "\n";
    return rep.exit_code;
}
