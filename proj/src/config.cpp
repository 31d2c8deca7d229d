#include "duelbench/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "duelbench/io.hpp"

namespace duelbench {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const char* where) {
    if (!j.is_object() || !j.contains(key))
        throw ParseError(std::string(where) + " is missing \"" + key + "\"");
    return j[key];
}

InstanceSpec parse_instance(const json& j) {
    InstanceSpec spec;
    spec.family = require(j, "family", "instance").get<std::string>();
    spec.k = require(j, "k", "instance").get<int>();
    if (spec.family == "lower_bound") {
        spec.tuned = j.value("tuned_epsilon", false);
        if (j.contains("epsilon")) spec.epsilon = j["epsilon"].get<double>();
        if (!spec.tuned && !spec.epsilon)
            throw ParseError("lower_bound instance needs \"epsilon\" or \"tuned_epsilon\"");
        spec.m = j.value("m", 0);
    } else if (spec.family != "uniform") {
        throw ParseError("unknown instance family \"" + spec.family + "\"");
    }
    return spec;
}

EnvironmentConfig parse_environment(const json& j) {
    EnvironmentConfig env;
    env.kind = require(j, "kind", "environment").get<std::string>();
    if (env.kind == "stationary") {
        if (j.contains("matrix")) env.matrix = j["matrix"];
        if (j.contains("instance")) env.instance = parse_instance(j["instance"]);
        if (!env.matrix && !env.instance)
            throw ParseError("stationary environment needs \"matrix\" or \"instance\"");
        if (env.matrix && env.instance)
            throw ParseError("stationary environment takes \"matrix\" or \"instance\", not both");
    } else if (env.kind == "fixed_gap") {
        env.k = require(j, "k", "fixed_gap environment").get<int>();
        env.delta = require(j, "delta", "fixed_gap environment").get<double>();
        env.perturbation_scale = j.value("perturbation_scale", 0.0);
        env.seed = j.value("seed", std::uint64_t{0});
    } else if (env.kind == "file") {
        env.path = require(j, "path", "file environment").get<std::string>();
        env.repair = j.value("repair", false);
    } else {
        throw ParseError("unknown environment kind \"" + env.kind + "\"");
    }
    return env;
}

PolicyConfig parse_policy(const json& j) {
    PolicyConfig pol;
    pol.kind = require(j, "kind", "policy").get<std::string>();
    static const std::set<std::string> kinds{"dexp3", "dexp3_hp", "bcb", "uniform"};
    if (!kinds.count(pol.kind)) throw ParseError("unknown policy kind \"" + pol.kind + "\"");
    if (j.contains("eta")) pol.eta = j["eta"].get<double>();
    if (j.contains("gamma")) pol.gamma = j["gamma"].get<double>();
    if (j.contains("beta")) pol.beta = j["beta"].get<double>();
    pol.delta = j.value("delta", 0.05);
    pol.clamp_bounds = j.value("clamp_bounds", false);
    if (j.contains("bound_gap")) pol.bound_gap = j["bound_gap"].get<double>();
    return pol;
}

std::vector<std::uint64_t> parse_seeds(const json& j) {
    std::vector<std::uint64_t> seeds;
    if (j.is_array()) {
        for (const auto& s : j) seeds.push_back(s.get<std::uint64_t>());
    } else if (j.is_object()) {
        const std::uint64_t base = require(j, "base", "seeds").get<std::uint64_t>();
        const std::int64_t count = require(j, "count", "seeds").get<std::int64_t>();
        if (count < 1) throw ParamError("seeds.count must be >= 1");
        for (std::int64_t i = 0; i < count; ++i) seeds.push_back(base + static_cast<std::uint64_t>(i));
    } else {
        throw ParseError("\"seeds\" must be an array or {base, count}");
    }
    if (seeds.empty()) throw ParamError("at least one seed is required");
    return seeds;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig cfg;
    cfg.environment = parse_environment(require(j, "environment", "config"));
    cfg.policy = parse_policy(require(j, "policy", "config"));
    cfg.horizon = require(j, "horizon", "config").get<std::int64_t>();
    if (cfg.horizon < 1) throw ParamError("horizon must be >= 1");
    cfg.seeds = parse_seeds(require(j, "seeds", "config"));
    if (j.contains("checkpoints")) {
        const json& c = j["checkpoints"];
        if (c.contains("list"))
            cfg.checkpoints.list = c["list"].get<std::vector<std::int64_t>>();
        else
            cfg.checkpoints.count = c.value("count", 100);
        if (cfg.checkpoints.count < 0) throw ParamError("checkpoints.count must be >= 0");
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        cfg.output.dir = o.value("dir", std::string("out"));
        if (o.contains("formats"))
            cfg.output.formats = o["formats"].get<std::vector<std::string>>();
        cfg.output.diagnostics = o.value("diagnostics", false);
    }
    for (const auto& f : cfg.output.formats)
        if (f != "csv" && f != "json") throw ParseError("unknown output format \"" + f + "\"");
    cfg.threads = j.value("threads", 1);
    if (cfg.threads < 1) throw ParamError("threads must be >= 1");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    return parse_config(read_json_file(path));
}

std::vector<std::int64_t> resolve_checkpoints(const CheckpointSpec& spec, std::int64_t horizon) {
    if (spec.list) {
        std::vector<std::int64_t> list = *spec.list;
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        return list;
    }
    std::set<std::int64_t> points;
    if (spec.count > 0) {
        const double logT = std::log(static_cast<double>(horizon));
        for (int i = 1; i <= spec.count; ++i) {
            const double f = static_cast<double>(i) / static_cast<double>(spec.count);
            auto t = static_cast<std::int64_t>(std::llround(std::exp(f * logT)));
            points.insert(std::clamp<std::int64_t>(t, 1, horizon));
        }
        points.insert(horizon);
    }
    return {points.begin(), points.end()};
}

std::shared_ptr<EnvironmentStream> build_environment(const ExperimentConfig& cfg) {
    const EnvironmentConfig& env = cfg.environment;
    if (env.kind == "stationary") {
        if (env.matrix) return stationary_env(matrix_from_json(*env.matrix), cfg.horizon);
        const InstanceSpec& inst = *env.instance;
        if (inst.family == "uniform") {
            if (inst.k < 2) throw ParamError("uniform instance needs K >= 2");
            Eigen::MatrixXd p = Eigen::MatrixXd::Constant(inst.k, inst.k, 0.5);
            return stationary_env(PreferenceMatrix::validated(std::move(p)), cfg.horizon);
        }
        const double eps =
            inst.tuned ? tuned_epsilon(inst.k, cfg.horizon) : *inst.epsilon;
        return stationary_env(lower_bound_instance(inst.k, eps, inst.m), cfg.horizon);
    }
    if (env.kind == "fixed_gap") {
        auto [stream, cert] =
            fixed_gap_env(env.k, env.delta, cfg.horizon, env.perturbation_scale, env.seed);
        (void)cert;
        return stream;
    }
    if (env.kind == "file") return env_from_file(env.path, cfg.horizon, env.repair);
    throw ParseError("unknown environment kind \"" + env.kind + "\"");
}

}  // namespace duelbench
