#include "duelbench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "duelbench/io.hpp"
#include "duelbench/summation.hpp"

namespace duelbench {

using nlohmann::json;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void warn_once(const std::string& message) {
    if (!message.empty()) std::cerr << "warning: " << message << "\n";
}

}  // namespace

json resolve_policy_params(const PolicyConfig& pol, int k, std::int64_t horizon) {
    json j{{"kind", pol.kind}, {"delta", pol.delta}};
    if (pol.kind == "dexp3") {
        if (pol.eta.has_value() != pol.gamma.has_value())
            throw ParamError("dexp3 takes eta and gamma together or neither");
        if (pol.eta) {
            j["eta"] = *pol.eta;
            j["gamma"] = *pol.gamma;
        } else {
            Dexp3Params p = dexp3_default_params(k, horizon);
            j["eta"] = p.eta;
            j["gamma"] = p.gamma;
        }
    } else if (pol.kind == "dexp3_hp") {
        const bool any = pol.eta || pol.gamma || pol.beta;
        const bool all = pol.eta && pol.gamma && pol.beta;
        if (any && !all) throw ParamError("dexp3_hp takes eta, gamma, beta together or none");
        if (all) {
            j["eta"] = *pol.eta;
            j["gamma"] = *pol.gamma;
            j["beta"] = *pol.beta;
        } else {
            HpParams p = hp_default_params(k, horizon, pol.delta);
            j["eta"] = p.eta;
            j["gamma"] = p.gamma;
            j["beta"] = p.beta;
        }
    } else if (pol.kind == "bcb") {
        j["clamp_bounds"] = pol.clamp_bounds;
        if (pol.bound_gap) j["bound_gap"] = *pol.bound_gap;
    }
    return j;
}

std::unique_ptr<Policy> make_policy(const PolicyConfig& pol, int k, std::int64_t horizon) {
    if (pol.kind == "dexp3") {
        Dexp3Params p;
        if (pol.eta) {
            p.eta = *pol.eta;
            p.gamma = pol.gamma.value_or(0.0);
        } else {
            p = dexp3_default_params(k, horizon);
            warn_once(p.warning);
        }
        return std::make_unique<Dexp3Policy>(k, p);
    }
    if (pol.kind == "dexp3_hp") {
        HpParams p;
        if (pol.eta && pol.gamma && pol.beta) {
            p.eta = *pol.eta;
            p.gamma = *pol.gamma;
            p.beta = *pol.beta;
        } else {
            p = hp_default_params(k, horizon, pol.delta);
            warn_once(p.warning);
        }
        return std::make_unique<Dexp3HpPolicy>(k, p, pol.delta);
    }
    if (pol.kind == "bcb")
        return std::make_unique<BcbPolicy>(k, horizon, pol.delta, pol.clamp_bounds);
    if (pol.kind == "uniform") return std::make_unique<UniformPolicy>(k);
    throw ParamError("unknown policy kind \"" + pol.kind + "\"");
}

namespace {

std::vector<std::string> diag_columns_for(const std::string& kind) {
    if (kind == "dexp3" || kind == "dexp3_hp") return {"diag_q_min", "diag_q_max"};
    if (kind == "bcb") return {"diag_committed", "diag_commit_item"};
    return {};
}

std::vector<double> diag_values_for(const Policy& policy, const std::string& kind) {
    if (kind == "dexp3") {
        const auto& q = static_cast<const Dexp3Policy&>(policy).weights();
        return {q.minCoeff(), q.maxCoeff()};
    }
    if (kind == "dexp3_hp") {
        const auto& q = static_cast<const Dexp3HpPolicy&>(policy).weights();
        return {q.minCoeff(), q.maxCoeff()};
    }
    if (kind == "bcb") {
        const auto& b = static_cast<const BcbPolicy&>(policy);
        return {b.committed() ? 1.0 : 0.0,
                b.committed() ? static_cast<double>(*b.committed() + 1) : 0.0};
    }
    return {};
}

}  // namespace

RunResult run_single(const ExperimentConfig& cfg, const EnvironmentStream& env,
                     std::uint64_t seed) {
    const int k = env.items();
    const std::int64_t horizon = cfg.horizon;
    auto policy = make_policy(cfg.policy, k, horizon);

    RngStream feedback_rng(derive_stream(seed, kFeedbackStream));
    RngStream policy_rng(derive_stream(seed, kPolicyStream));

    const std::vector<std::int64_t> checkpoints =
        resolve_checkpoints(cfg.checkpoints, horizon);
    RegretTrace trace(k, horizon, checkpoints);

    RunResult result;
    result.seed = seed;
    if (cfg.output.diagnostics) result.diag_columns = diag_columns_for(cfg.policy.kind);

    std::size_t next_checkpoint = 0;
    if (env.stationary()) {
        const PreferenceMatrix m = env.matrix_at(1);
        const ScoreVector b = borda_scores(m);
        const ScoreVector s = shifted_scores(m);
        for (std::int64_t t = 1; t <= horizon; ++t) {
            auto [x, y] = policy->select_pair(policy_rng);
            const int o = sample_feedback(m, x, y, feedback_rng);
            policy->observe(x, y, o);
            trace.record_round(b, s, x, y, o);
            if (next_checkpoint < checkpoints.size() && t == checkpoints[next_checkpoint]) {
                if (cfg.output.diagnostics)
                    result.diag_rows.push_back(diag_values_for(*policy, cfg.policy.kind));
                ++next_checkpoint;
            }
        }
    } else {
        for (std::int64_t t = 1; t <= horizon; ++t) {
            const PreferenceMatrix m = env.matrix_at(t);
            const ScoreVector b = borda_scores(m);
            const ScoreVector s = shifted_scores(m);
            auto [x, y] = policy->select_pair(policy_rng);
            const int o = sample_feedback(m, x, y, feedback_rng);
            policy->observe(x, y, o);
            trace.record_round(b, s, x, y, o);
            if (next_checkpoint < checkpoints.size() && t == checkpoints[next_checkpoint]) {
                if (cfg.output.diagnostics)
                    result.diag_rows.push_back(diag_values_for(*policy, cfg.policy.kind));
                ++next_checkpoint;
            }
        }
    }

    result.trace = trace.finalize();
    result.final_policy_state = policy->state_snapshot();
    return result;
}

RunResult run_single(const ExperimentConfig& cfg, std::uint64_t seed) {
    auto env = build_environment(cfg);
    return run_single(cfg, *env, seed);
}

namespace {

struct SortedStats {
    double mean, stddev, p10, p50, p90;
};

// Reduction over a value-sorted copy: identical result for any seed order.
SortedStats stats_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    KahanSum sum;
    for (double v : values) sum.add(v);
    const double mean = sum.value() / static_cast<double>(n);
    KahanSum sq;
    for (double v : values) sq.add((v - mean) * (v - mean));
    const double stddev = std::sqrt(sq.value() / static_cast<double>(n));
    auto nearest_rank = [&](double p) {
        std::size_t rank = static_cast<std::size_t>(
            std::ceil(p / 100.0 * static_cast<double>(n)));
        rank = std::clamp<std::size_t>(rank, 1, n);
        return values[rank - 1];
    };
    return {mean, stddev, nearest_rank(10), nearest_rank(50), nearest_rank(90)};
}

}  // namespace

std::vector<double> bound_curve(const std::string& policy_kind, int k,
                                const std::vector<std::int64_t>& checkpoints,
                                std::int64_t horizon, double delta, double gap) {
    if (k < 2) throw ParamError("bound_curve needs K >= 2");
    const double kd = static_cast<double>(k);
    std::vector<double> out;
    out.reserve(checkpoints.size());
    if (policy_kind == "dexp3") {
        const double c = 6.0 * std::cbrt(kd * std::log(kd));
        for (std::int64_t t : checkpoints)
            out.push_back(c * std::pow(static_cast<double>(t), 2.0 / 3.0));
        return out;
    }
    if (policy_kind == "dexp3_hp") {
        if (!(delta > 0.0 && delta < 1.0)) throw ParamError("delta must lie in (0, 1)");
        const double c1 = 3.0 * std::cbrt(2.0 * std::log(kd));
        const double c2 = std::pow(2.0, 5.0 / 6.0) * std::sqrt(std::log(kd / delta)) /
                          std::pow(std::log(kd), 1.0 / 6.0);
        const double c = 2.0 * (c1 + c2) * std::cbrt(kd);
        for (std::int64_t t : checkpoints)
            out.push_back(c * std::pow(static_cast<double>(t), 2.0 / 3.0));
        return out;
    }
    if (policy_kind == "bcb") {
        const double v = bcb_commit_time_bound_raw(k, horizon, delta, gap);
        out.assign(checkpoints.size(), v);
        return out;
    }
    throw ParamError("no regret bound for policy kind \"" + policy_kind + "\"");
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    auto env = build_environment(cfg);
    const std::size_t n = cfg.seeds.size();

    SweepResult result;
    result.per_seed.resize(n);
    std::vector<std::string> failures(n);

    const int threads =
        std::max(1, std::min<int>(cfg.threads, static_cast<int>(n)));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                result.per_seed[i] = run_single(cfg, *env, cfg.seeds[i]);
            } catch (const std::exception& e) {
                throw Error("seed " + std::to_string(cfg.seeds[i]) + " failed: " + e.what());
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    result.per_seed[i] = run_single(cfg, *env, cfg.seeds[i]);
                } catch (const std::exception& e) {
                    failures[i] = e.what();
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        for (std::size_t i = 0; i < n; ++i) {
            if (!failures[i].empty())
                throw Error("seed " + std::to_string(cfg.seeds[i]) + " failed: " + failures[i]);
        }
    }

    // Aggregate.
    const std::vector<std::int64_t> checkpoints =
        resolve_checkpoints(cfg.checkpoints, cfg.horizon);
    AggregateSummary& agg = result.summary;
    agg.checkpoints = checkpoints;

    std::vector<double> bounds(checkpoints.size(), kNan);
    bool have_bound = false;
    try {
        if (cfg.policy.kind == "bcb") {
            if (cfg.policy.bound_gap) {
                bounds = bound_curve("bcb", env->items(), checkpoints, cfg.horizon,
                                     cfg.policy.delta, *cfg.policy.bound_gap);
                have_bound = true;
            }
        } else if (cfg.policy.kind != "uniform") {
            bounds = bound_curve(cfg.policy.kind, env->items(), checkpoints, cfg.horizon,
                                 cfg.policy.delta, 0.0);
            have_bound = true;
        }
    } catch (const ParamError&) {
        have_bound = false;  // leave NaN columns
    }

    for (std::size_t ci = 0; ci < checkpoints.size(); ++ci) {
        std::vector<double> values(n);
        for (std::size_t si = 0; si < n; ++si)
            values[si] = result.per_seed[si].trace.rows[ci].R_t;
        const SortedStats st = stats_of(values);
        agg.mean.push_back(st.mean);
        agg.stddev.push_back(st.stddev);
        agg.p10.push_back(st.p10);
        agg.p50.push_back(st.p50);
        agg.p90.push_back(st.p90);
        agg.bound.push_back(bounds[ci]);
        if (have_bound) {
            std::size_t under = 0;
            for (double v : values)
                if (v <= bounds[ci]) ++under;
            agg.frac_under_bound.push_back(static_cast<double>(under) /
                                           static_cast<double>(n));
        } else {
            agg.frac_under_bound.push_back(kNan);
        }
    }

    result.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

json resolved_config_json(const ExperimentConfig& cfg) {
    auto env = build_environment(cfg);
    json envj{{"kind", cfg.environment.kind}, {"k", env->items()}, {"label", env->label()}};
    if (cfg.environment.kind == "stationary") {
        if (cfg.environment.instance) {
            const InstanceSpec& inst = *cfg.environment.instance;
            json ij{{"family", inst.family}, {"k", inst.k}};
            if (inst.family == "lower_bound") {
                ij["m"] = inst.m;
                ij["epsilon"] =
                    inst.tuned ? tuned_epsilon(inst.k, cfg.horizon) : *inst.epsilon;
                ij["tuned_epsilon"] = inst.tuned;
            }
            envj["instance"] = ij;
        } else {
            envj["matrix"] = *cfg.environment.matrix;
        }
    } else if (cfg.environment.kind == "fixed_gap") {
        envj["delta"] = cfg.environment.delta;
        envj["perturbation_scale"] = cfg.environment.perturbation_scale;
        envj["seed"] = cfg.environment.seed;
    } else if (cfg.environment.kind == "file") {
        envj["path"] = cfg.environment.path;
        envj["repair"] = cfg.environment.repair;
    }

    return json{{"version", kVersion},
                {"environment", envj},
                {"policy", resolve_policy_params(cfg.policy, env->items(), cfg.horizon)},
                {"horizon", cfg.horizon},
                {"seeds", cfg.seeds},
                {"checkpoints", resolve_checkpoints(cfg.checkpoints, cfg.horizon)},
                {"output",
                 {{"dir", cfg.output.dir},
                  {"formats", cfg.output.formats},
                  {"diagnostics", cfg.output.diagnostics}}},
                {"threads", cfg.threads}};
}

std::string trace_csv(const RunResult& run) {
    std::ostringstream out;
    out << "t,x,y,o,r_t,R_t,R_s_t";
    for (const auto& c : run.diag_columns) out << "," << c;
    out << "\n";
    for (std::size_t i = 0; i < run.trace.rows.size(); ++i) {
        const TraceRow& r = run.trace.rows[i];
        out << r.t << "," << (r.x + 1) << "," << (r.y + 1) << "," << r.o << ","
            << format_double(r.r_t) << "," << format_double(r.R_t) << ","
            << format_double(r.R_s_t);
        if (!run.diag_columns.empty())
            for (double v : run.diag_rows[i]) out << "," << format_double(v);
        out << "\n";
    }
    return out.str();
}

std::string aggregate_csv(const AggregateSummary& s) {
    std::ostringstream out;
    out << "t,mean_R,std_R,p10,p50,p90,bound,frac_under_bound\n";
    for (std::size_t i = 0; i < s.checkpoints.size(); ++i) {
        out << s.checkpoints[i] << "," << format_double(s.mean[i]) << ","
            << format_double(s.stddev[i]) << "," << format_double(s.p10[i]) << ","
            << format_double(s.p50[i]) << "," << format_double(s.p90[i]) << ","
            << format_double(s.bound[i]) << "," << format_double(s.frac_under_bound[i])
            << "\n";
    }
    return out.str();
}

namespace {

json trace_json(const RunResult& run) {
    json rows = json::array();
    for (std::size_t i = 0; i < run.trace.rows.size(); ++i) {
        const TraceRow& r = run.trace.rows[i];
        json row{{"t", r.t},     {"x", r.x + 1},  {"y", r.y + 1},    {"o", r.o},
                 {"r_t", r.r_t}, {"R_t", r.R_t},  {"R_s_t", r.R_s_t}};
        if (!run.diag_columns.empty())
            for (std::size_t d = 0; d < run.diag_columns.size(); ++d)
                row[run.diag_columns[d]] = run.diag_rows[i][d];
        rows.push_back(std::move(row));
    }
    return json{{"seed", run.seed},
                {"i_star", run.trace.i_star + 1},
                {"total_regret", run.trace.total_regret},
                {"total_shifted_regret", run.trace.total_shifted_regret},
                {"final_policy_state", run.final_policy_state},
                {"rows", std::move(rows)}};
}

void write_text_file(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IOError("cannot write " + path.string());
    out << text;
    if (!out) throw IOError("write failed for " + path.string());
}

}  // namespace

void emit_outputs(const SweepResult& result, const ExperimentConfig& cfg,
                  const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IOError("cannot create output directory " + out_dir);
    const fs::path dir(out_dir);

    const bool csv = std::count(cfg.output.formats.begin(), cfg.output.formats.end(), "csv");
    const bool jsn = std::count(cfg.output.formats.begin(), cfg.output.formats.end(), "json");

    for (const RunResult& run : result.per_seed) {
        const std::string stem = "trace_seed" + std::to_string(run.seed);
        if (csv) write_text_file(trace_csv(run), dir / (stem + ".csv"));
        if (jsn) write_json_file(trace_json(run), (dir / (stem + ".json")).string());
    }
    if (csv) write_text_file(aggregate_csv(result.summary), dir / "aggregate.csv");
    if (jsn) {
        json agg{{"checkpoints", result.summary.checkpoints},
                 {"mean_R", result.summary.mean},
                 {"std_R", result.summary.stddev},
                 {"p10", result.summary.p10},
                 {"p50", result.summary.p50},
                 {"p90", result.summary.p90},
                 {"bound", result.summary.bound},
                 {"frac_under_bound", result.summary.frac_under_bound}};
        write_json_file(agg, (dir / "aggregate.json").string());
    }

    write_json_file(resolved_config_json(cfg), (dir / "config.resolved.json").string());

    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    json manifest{{"artifact", "duelbench"},
                  {"version", kVersion},
                  {"generated_at", stamp},
                  {"wall_clock_seconds", result.wall_clock_seconds},
                  {"seed_count", result.per_seed.size()}};
    write_json_file(manifest, (dir / "manifest.json").string());
}

}  // namespace duelbench
