#include "rarefan/cli_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv)
{
    CLI::App app{"rarefan: multi-class zero-range and exclusion simulations"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "run one experiment from a config or manifest");
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::size_t> replicas;
    std::optional<int> threads;
    run_cmd->add_option("--config", config_path, "JSON run config, or a manifest.json from an earlier run")->required();
    run_cmd->add_option("--seed", seed, "override masterSeed");
    run_cmd->add_option("--out", out_dir, "override outDir");
    run_cmd->add_option("--replicas", replicas, "override N")->check(CLI::PositiveNumber);
    run_cmd->add_option("--threads", threads, "worker threads (default: RAREFAN_THREADS, then all cores)")
        ->check(CLI::PositiveNumber);

    auto* list_cmd = app.add_subcommand("list-experiments", "list experiment names");

    CLI11_PARSE(app, argc, argv);

    if (list_cmd->parsed()) {
        for (const auto& info : rarefan::experiment_catalog())
            std::cout << info.name << "\t" << info.description << "\n";
        return 0;
    }

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot read " << config_path << "\n";
        return rarefan::kExitFailure;
    }
    std::stringstream text;
    text << in.rdbuf();

    rarefan::RunConfig config;
    try {
        config = rarefan::parse_config(text.str());
    } catch (const rarefan::ConfigError& err) {
        std::cerr << "config error " << err.what() << "\n";
        return rarefan::kExitFailure;
    }
    if (seed)
        config.master_seed = *seed;
    if (out_dir)
        config.out_dir = *out_dir;
    if (replicas)
        config.replicas = *replicas;

    rarefan::ReplicaOptions exec;
    if (threads) {
        exec.threads = *threads;
    } else if (const char* env = std::getenv("RAREFAN_THREADS")) {
        exec.threads = std::atoi(env);
        if (exec.threads < 0)
            exec.threads = 0;
    }
    return rarefan::run(config, exec, std::cout);
}
