#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "duelbench/config.hpp"
#include "duelbench/policy.hpp"
#include "duelbench/regret.hpp"

namespace duelbench {

inline constexpr const char* kVersion = "0.1.0";

struct RunResult {
    std::uint64_t seed = 0;
    FinalizedTrace trace;
    std::vector<std::string> diag_columns;          // empty unless diagnostics on
    std::vector<std::vector<double>> diag_rows;     // aligned with trace.rows
    nlohmann::json final_policy_state;
};

// Cross-seed statistics per checkpoint. Percentiles are nearest-rank; the
// bound columns compare against bound_curve when the policy has one.
struct AggregateSummary {
    std::vector<std::int64_t> checkpoints;
    std::vector<double> mean;
    std::vector<double> stddev;  // population
    std::vector<double> p10;
    std::vector<double> p50;
    std::vector<double> p90;
    std::vector<double> bound;             // NaN when no bound applies
    std::vector<double> frac_under_bound;  // NaN when no bound applies
};

struct SweepResult {
    std::vector<RunResult> per_seed;  // ordered as cfg.seeds
    AggregateSummary summary;
    double wall_clock_seconds = 0.0;
};

// Resolved policy parameters (defaults computed from K and T) echoed as
// JSON so emitted results are self-describing.
nlohmann::json resolve_policy_params(const PolicyConfig& pol, int k, std::int64_t horizon);

std::unique_ptr<Policy> make_policy(const PolicyConfig& pol, int k, std::int64_t horizon);

// One deterministic run: the root seed derives independent feedback and
// policy sub-streams. The overload taking a stream lets sweeps share one
// immutable environment across seeds.
RunResult run_single(const ExperimentConfig& cfg, std::uint64_t seed);
RunResult run_single(const ExperimentConfig& cfg, const EnvironmentStream& env,
                     std::uint64_t seed);

// Runs every configured seed (cfg.threads workers); a failing seed aborts
// the sweep with that seed identified. Summary statistics reduce over
// value-sorted copies, so they are independent of seed order and of
// serial-vs-parallel execution.
SweepResult run_sweep(const ExperimentConfig& cfg);

// Closed-form regret bounds evaluated at each checkpoint t:
//   dexp3:    6 (K ln K)^(1/3) t^(2/3)
//   dexp3_hp: 2 (3 (2 ln K)^(1/3) + 2^(5/6) sqrt(ln(K/delta)) / (ln K)^(1/6))
//               * K^(1/3) t^(2/3)
//   bcb:      64 (K / gap^2) ln(2 K T / delta)   (constant in t)
// Throws ParamError for policies without a bound.
std::vector<double> bound_curve(const std::string& policy_kind, int k,
                                const std::vector<std::int64_t>& checkpoints,
                                std::int64_t horizon, double delta, double gap);

nlohmann::json resolved_config_json(const ExperimentConfig& cfg);

// Writes per-seed traces (csv and/or json), aggregate.csv, the resolved
// config, and a run manifest into out_dir. Output bytes are a pure function
// of (resolved config, seeds) except for the manifest timestamp.
void emit_outputs(const SweepResult& result, const ExperimentConfig& cfg,
                  const std::string& out_dir);

std::string trace_csv(const RunResult& run);
std::string aggregate_csv(const AggregateSummary& summary);

}  // namespace duelbench
