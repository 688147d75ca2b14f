#include "fppcm/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"First-passage percolation on scale-free configuration models"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a named experiment");
    std::string experiment;
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t workers = 0;
    bool force = false;
    run->add_option("--experiment", experiment, "Experiment id")
        ->required()
        ->check(CLI::IsMember({"ratio", "upper-path", "multi-edge",
                               "percolation-eq", "bp-explosion", "tail-check"}));
    run->add_option("--config", config_path, "Config file (key = value lines)")
        ->required();
    run->add_option("--seed", seed, "Master seed override")
        ->each([&](const std::string&) { seed_set = true; });
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--workers", workers, "Worker thread count override");
    run->add_flag("--force", force, "Run even if preconditions warn");

    CLI11_PARSE(app, argc, argv);

    try {
        fppcm::ExperimentConfig cfg =
            fppcm::ExperimentConfig::parse_file(config_path);
        cfg.experiment = experiment;
        if (seed_set) cfg.seed = seed;
        if (workers > 0) cfg.workers = workers;
        if (force) cfg.force = true;

        const fppcm::ExperimentResult result = fppcm::run_experiment(cfg);

        std::filesystem::create_directories(out_dir);
        const std::string stem = out_dir + "/" + experiment;
        fppcm::emit_csv(result, stem + ".csv");
        fppcm::emit_json(result, stem + ".json");

        std::printf("%s: %s (%zu rows, %zu dropped) -> %s.{csv,json}\n",
                    experiment.c_str(), result.pass ? "pass" : "FAIL",
                    result.rows.size(), result.dropped_disconnected,
                    stem.c_str());
        return result.pass ? 0 : 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
