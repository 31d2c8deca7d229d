// duelbench command-line front end.
//
// Subcommands:
//   run           one seeded run of a configured experiment
//   sweep         all configured seeds, with aggregation
//   bounds        print a theoretical regret-bound curve
//   validate-env  scan an environment for the fixed-gap condition
//   gen-instance  write a lower-bound block instance to a sequence file
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "duelbench/config.hpp"
#include "duelbench/harness.hpp"
#include "duelbench/io.hpp"

namespace {

using namespace duelbench;

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

bool is_config_error(const std::exception& e) {
    return dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ParamError*>(&e) ||
           dynamic_cast<const ShapeError*>(&e) || dynamic_cast<const RangeError*>(&e) ||
           dynamic_cast<const DiagonalError*>(&e) ||
           dynamic_cast<const AsymmetryError*>(&e) ||
           dynamic_cast<const ValidationError*>(&e);
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::uint64_t base = std::stoull(text.substr(0, colon));
        const std::uint64_t count = std::stoull(text.substr(colon + 1));
        if (count < 1) throw ParamError("seed count must be >= 1");
        for (std::uint64_t i = 0; i < count; ++i) seeds.push_back(base + i);
        return seeds;
    }
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto comma = text.find(',', pos);
        const std::string tok =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) seeds.push_back(std::stoull(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (seeds.empty()) throw ParamError("empty seed list");
    return seeds;
}

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string seeds_text;
    std::string format;
    int checkpoints = -1;
    int threads = 0;
    bool diagnostics = false;
};

ExperimentConfig load_and_override(const CommonFlags& flags) {
    ExperimentConfig cfg = load_config(flags.config_path);
    if (!flags.out_dir.empty()) cfg.output.dir = flags.out_dir;
    if (!flags.seeds_text.empty()) cfg.seeds = parse_seed_list(flags.seeds_text);
    if (!flags.format.empty()) {
        if (flags.format != "csv" && flags.format != "json")
            throw ParseError("unknown format \"" + flags.format + "\"");
        cfg.output.formats = {flags.format};
    }
    if (flags.checkpoints >= 0) {
        cfg.checkpoints.count = flags.checkpoints;
        cfg.checkpoints.list.reset();
    }
    if (flags.threads > 0) cfg.threads = flags.threads;
    if (flags.diagnostics) cfg.output.diagnostics = true;
    return cfg;
}

int cmd_run(const CommonFlags& flags, std::optional<std::uint64_t> seed) {
    ExperimentConfig cfg;
    try {
        cfg = load_and_override(flags);
        if (seed) cfg.seeds = {*seed};
        cfg.seeds.resize(1);
        cfg.threads = 1;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    try {
        SweepResult result = run_sweep(cfg);
        emit_outputs(result, cfg, cfg.output.dir);
        const RunResult& run = result.per_seed.front();
        std::cout << "seed " << run.seed << ": R_T = " << format_double(run.trace.total_regret)
                  << ", i* = " << (run.trace.i_star + 1) << ", outputs in " << cfg.output.dir
                  << "\n";
        return kOk;
    } catch (const std::exception& e) {
        if (is_config_error(e)) {
            std::cerr << "config error: " << e.what() << "\n";
            return kConfigError;
        }
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

int cmd_sweep(const CommonFlags& flags) {
    ExperimentConfig cfg;
    try {
        cfg = load_and_override(flags);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    try {
        SweepResult result = run_sweep(cfg);
        emit_outputs(result, cfg, cfg.output.dir);
        const auto& agg = result.summary;
        if (!agg.checkpoints.empty()) {
            std::cout << "seeds " << cfg.seeds.size()
                      << ": mean R_T = " << format_double(agg.mean.back()) << " (p90 "
                      << format_double(agg.p90.back()) << ") at T = " << agg.checkpoints.back()
                      << ", outputs in " << cfg.output.dir << "\n";
        } else {
            std::cout << "seeds " << cfg.seeds.size()
                      << ": no checkpoints configured, outputs in " << cfg.output.dir << "\n";
        }
        return kOk;
    } catch (const std::exception& e) {
        if (is_config_error(e)) {
            std::cerr << "config error: " << e.what() << "\n";
            return kConfigError;
        }
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

int cmd_bounds(const std::string& policy, int k, std::int64_t horizon, double delta, double gap,
               int checkpoints, const std::string& out_path) {
    try {
        CheckpointSpec spec;
        spec.count = checkpoints;
        const std::vector<std::int64_t> ts = resolve_checkpoints(spec, horizon);
        const std::vector<double> bounds = bound_curve(policy, k, ts, horizon, delta, gap);
        std::string text = "t,bound\n";
        for (std::size_t i = 0; i < ts.size(); ++i)
            text += std::to_string(ts[i]) + "," + format_double(bounds[i]) + "\n";
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path);
            if (!out) throw IOError("cannot write " + out_path);
            out << text;
        }
        return kOk;
    } catch (const std::exception& e) {
        if (is_config_error(e)) {
            std::cerr << "config error: " << e.what() << "\n";
            return kConfigError;
        }
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

int cmd_validate_env(const CommonFlags& flags, int best_item, double gap) {
    ExperimentConfig cfg;
    std::shared_ptr<EnvironmentStream> env;
    try {
        cfg = load_and_override(flags);
        if (best_item < 1) throw ParamError("--best-item is 1-based");
        env = build_environment(cfg);
        if (best_item > env->items()) throw ParamError("--best-item exceeds K");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    try {
        const FixedGapCertificate cert = check_fixed_gap(*env, best_item - 1, gap);
        nlohmann::json j{{"i_star", cert.i_star + 1},
                         {"delta", cert.delta},
                         {"min_observed_gap", cert.min_observed_gap},
                         {"verified_through", cert.verified_through},
                         {"valid", cert.valid}};
        std::cout << j.dump(2) << "\n";
        return kOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

int cmd_gen_instance(int k, double epsilon, bool tuned, std::int64_t horizon, int m,
                     const std::string& out_path, bool cycle) {
    try {
        const double eps = tuned ? tuned_epsilon(k, horizon) : epsilon;
        MatrixSequence seq;
        seq.k = k;
        seq.cycle = cycle;
        seq.matrices.push_back(lower_bound_instance(k, eps, m));
        save_sequence(seq, out_path);
        std::cout << "wrote instance (K=" << k << ", epsilon=" << format_double(eps)
                  << ", m=" << m << ") to " << out_path << "\n";
        return kOk;
    } catch (const std::exception& e) {
        if (is_config_error(e)) {
            std::cerr << "config error: " << e.what() << "\n";
            return kConfigError;
        }
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"duelbench: adversarial dueling-bandit benchmark harness"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto add_common = [&flags](CLI::App* cmd, bool with_seeds) {
        cmd->add_option("--config", flags.config_path, "experiment config (JSON)")->required();
        cmd->add_option("--out", flags.out_dir, "output directory (overrides config)");
        if (with_seeds)
            cmd->add_option("--seeds", flags.seeds_text, "seed list 1,2,3 or base:count");
        cmd->add_option("--format", flags.format, "csv or json (overrides config)");
        cmd->add_option("--checkpoints", flags.checkpoints, "geometric checkpoint count");
        cmd->add_flag("--diag", flags.diagnostics, "record policy diagnostics at checkpoints");
    };

    CLI::App* run = app.add_subcommand("run", "one seeded run");
    add_common(run, false);
    std::uint64_t seed_value = 0;
    CLI::Option* seed_opt = run->add_option("--seed", seed_value, "root seed for this run");

    CLI::App* sweep = app.add_subcommand("sweep", "run all configured seeds");
    add_common(sweep, true);
    sweep->add_option("--threads", flags.threads, "worker threads (overrides config)");

    CLI::App* bounds = app.add_subcommand("bounds", "print a regret-bound curve");
    std::string bounds_policy;
    int bounds_k = 0;
    std::int64_t bounds_T = 0;
    double bounds_delta = 0.05;
    double bounds_gap = 0.0;
    int bounds_checkpoints = 100;
    std::string bounds_out;
    bounds->add_option("--policy", bounds_policy, "dexp3, dexp3_hp, or bcb")->required();
    bounds->add_option("--k", bounds_k, "item count")->required();
    bounds->add_option("--horizon", bounds_T, "horizon T")->required();
    bounds->add_option("--delta", bounds_delta, "confidence parameter");
    bounds->add_option("--gap", bounds_gap, "Borda gap (bcb bound)");
    bounds->add_option("--checkpoints", bounds_checkpoints, "geometric checkpoint count");
    bounds->add_option("--out", bounds_out, "write CSV here instead of stdout");

    CLI::App* validate = app.add_subcommand("validate-env", "fixed-gap certificate check");
    add_common(validate, false);
    int best_item = 1;
    double validate_gap = 0.0;
    validate->add_option("--best-item", best_item, "candidate winner (1-based)");
    validate->add_option("--gap", validate_gap, "gap to certify")->required();

    CLI::App* gen = app.add_subcommand("gen-instance", "emit a lower-bound instance file");
    int gen_k = 0, gen_m = 0;
    double gen_eps = 0.0;
    bool gen_tuned = false, gen_cycle = true;
    std::int64_t gen_T = 0;
    std::string gen_out;
    gen->add_option("--k", gen_k, "item count (even, >= 4)")->required();
    CLI::Option* eps_opt = gen->add_option("--epsilon", gen_eps, "perturbation in (0, 0.1]");
    gen->add_flag("--tuned", gen_tuned, "derive epsilon from (K, horizon)");
    gen->add_option("--horizon", gen_T, "horizon for --tuned");
    gen->add_option("--m", gen_m, "perturbed good item (1-based), 0 for none");
    gen->add_option("--out", gen_out, "output sequence file")->required();
    gen->add_flag("--cycle,!--no-cycle", gen_cycle, "mark the sequence as cycling");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        std::optional<std::uint64_t> run_seed;
        if (*seed_opt) run_seed = seed_value;
        return cmd_run(flags, run_seed);
    }
    if (sweep->parsed()) return cmd_sweep(flags);
    if (bounds->parsed())
        return cmd_bounds(bounds_policy, bounds_k, bounds_T, bounds_delta, bounds_gap,
                          bounds_checkpoints, bounds_out);
    if (validate->parsed()) return cmd_validate_env(flags, best_item, validate_gap);
    if (gen->parsed()) {
        if (!gen_tuned && !*eps_opt) {
            std::cerr << "config error: gen-instance needs --epsilon or --tuned\n";
            return kConfigError;
        }
        return cmd_gen_instance(gen_k, gen_eps, gen_tuned, gen_T, gen_m, gen_out, gen_cycle);
    }
    return kOk;
}
