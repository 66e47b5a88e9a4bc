#pragma once

#include "rarefan/density.hpp"
#include "rarefan/experiments.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rarefan {

inline constexpr const char* kToolVersion = "rarefan 1.0.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitThresholdFailed = 2,
    kExitLightCone = 3,
};

struct RunConfig {
    std::string experiment;
    double t = 400.0;
    std::size_t replicas = 4000;
    Density rho = 1.0;
    double lambda = 0.0;
    std::int64_t jmax = 25;
    std::vector<double> u_grid;
    std::int64_t ring_size = 64;
    std::int64_t particles = 50;
    std::uint64_t master_seed = 0;
    std::string out_dir = "rarefan_out";
    double epsilon = 0.02;
    double delta = 1e-3;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentInfo {
    std::string name;
    std::string description;
};

const std::vector<ExperimentInfo>& experiment_catalog();

// Accepts a run config or a manifest written by `run` (its runConfig is used).
// Unknown keys and out-of-range values raise ConfigError naming the field.
RunConfig parse_config(const std::string& text);
nlohmann::json config_to_json(const RunConfig& config);
// 16 hex digits, FNV-1a over the canonical JSON dump
std::string config_hash(const RunConfig& config);

ExperimentPlan plan_from_config(const RunConfig& config, const ReplicaOptions& exec);

struct Verdict {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct RunResult {
    std::string csv;
    nlohmann::json summary;
    std::vector<Verdict> verdicts;
    std::size_t violations = 0;
};

// runs the experiment in memory
RunResult execute(const RunConfig& config, const ReplicaOptions& exec);

// runs and writes results.csv, summary.json and manifest.json to config.out_dir
int run(const RunConfig& config, const ReplicaOptions& exec, std::ostream& log);

}
