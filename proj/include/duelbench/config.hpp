#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "duelbench/environment.hpp"

namespace duelbench {

struct InstanceSpec {
    std::string family;  // "lower_bound" | "uniform"
    int k = 0;
    std::optional<double> epsilon;  // lower_bound: explicit value
    bool tuned = false;             // lower_bound: derive epsilon from (K, T)
    int m = 0;                      // lower_bound: perturbed good item, 0 = none
};

struct EnvironmentConfig {
    std::string kind;  // "stationary" | "fixed_gap" | "file"
    std::optional<nlohmann::json> matrix;  // stationary: inline {"k","p"}
    std::optional<InstanceSpec> instance;  // stationary: generated matrix
    // fixed_gap:
    int k = 0;
    double delta = 0.0;
    double perturbation_scale = 0.0;
    std::uint64_t seed = 0;
    // file:
    std::string path;
    bool repair = false;
};

struct PolicyConfig {
    std::string kind;  // "dexp3" | "dexp3_hp" | "bcb" | "uniform"
    std::optional<double> eta;
    std::optional<double> gamma;
    std::optional<double> beta;
    double delta = 0.05;
    bool clamp_bounds = false;
    std::optional<double> bound_gap;  // gap used for the BCB bound column
};

struct CheckpointSpec {
    int count = 100;  // geometric spacing, plus round T
    std::optional<std::vector<std::int64_t>> list;
};

struct OutputConfig {
    std::string dir = "out";
    std::vector<std::string> formats = {"csv"};
    bool diagnostics = false;
};

struct ExperimentConfig {
    EnvironmentConfig environment;
    PolicyConfig policy;
    std::int64_t horizon = 0;
    std::vector<std::uint64_t> seeds;
    CheckpointSpec checkpoints;
    OutputConfig output;
    int threads = 1;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Concrete checkpoint rounds: `count` geometrically spaced values plus T,
// deduplicated and ascending. An explicit list wins over the count.
std::vector<std::int64_t> resolve_checkpoints(const CheckpointSpec& spec, std::int64_t horizon);

// Builds the configured stream. `horizon` comes from the experiment config.
std::shared_ptr<EnvironmentStream> build_environment(const ExperimentConfig& cfg);

}  // namespace duelbench
