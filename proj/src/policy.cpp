#include "duelbench/policy.hpp"

#include <cmath>

namespace duelbench {

namespace {

void check_item(int i, int k) {
    if (i < 0 || i >= k) throw IndexError("item index out of range: " + std::to_string(i + 1));
}

void check_outcome(int o) {
    if (o != 0 && o != 1) throw ParamError("feedback must be 0 or 1, got " + std::to_string(o));
}

}  // namespace

Dexp3Params dexp3_default_params(int k, std::int64_t horizon) {
    if (k < 2) throw ParamError("dexp3_default_params needs K >= 2");
    if (horizon < 1) throw ParamError("dexp3_default_params needs T >= 1");
    const double kd = static_cast<double>(k);
    const double td = static_cast<double>(horizon);
    Dexp3Params p;
    p.eta = std::pow(std::log(kd) / (td * std::sqrt(kd)), 2.0 / 3.0);
    p.gamma = std::sqrt(p.eta * kd);
    if (p.gamma > 1.0)
        throw ParamError("horizon too short for the default schedule: gamma = " +
                         std::to_string(p.gamma) + " > 1");
    if (td < kd * std::log(kd))
        p.warning = "T < K ln K: the default schedule is outside its validated range";
    return p;
}

HpParams hp_default_params(int k, std::int64_t horizon, double delta) {
    if (k < 2) throw ParamError("hp_default_params needs K >= 2");
    if (horizon < 1) throw ParamError("hp_default_params needs T >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw ParamError("delta must lie in (0, 1)");
    const double kd = static_cast<double>(k);
    const double td = static_cast<double>(horizon);
    HpParams p;
    p.eta = std::pow(std::log(kd) / (td * std::sqrt(2.0 * kd)), 2.0 / 3.0);
    p.gamma = std::sqrt(2.0 * p.eta * kd);
    p.beta = std::sqrt(std::log(kd / delta)) /
             (std::sqrt(td) * std::pow(2.0 * p.eta, 0.25) * std::pow(kd, 0.75));
    if (p.gamma > 1.0)
        throw ParamError("horizon too short for the default schedule: gamma = " +
                         std::to_string(p.gamma) + " > 1");
    if (!(p.beta > 0.0 && p.beta < 1.0))
        throw ParamError("default beta = " + std::to_string(p.beta) + " outside (0, 1)");
    if (td < 2.0 * kd * std::log(kd))
        p.warning = "T < 2 K ln K: the default schedule is outside its validated range";
    return p;
}

void dexp3_estimate_into(const Eigen::VectorXd& q, int x, int y, int o, Eigen::VectorXd& out) {
    const int k = static_cast<int>(q.size());
    check_item(x, k);
    check_item(y, k);
    check_outcome(o);
    if ((q.array() <= 0.0).any())
        throw DegenerateDistribution("sampling distribution has a nonpositive entry");
    out.setZero(k);
    if (o == 1) out(x) = 1.0 / (static_cast<double>(k) * q(x) * q(y));
}

ScoreVector dexp3_estimate(const Eigen::VectorXd& q, int x, int y, int o) {
    Eigen::VectorXd v;
    dexp3_estimate_into(q, x, y, o, v);
    return ScoreVector{std::move(v), ScoreKind::estimated};
}

void hp_estimate_into(const Eigen::VectorXd& q, int x, int y, int o, double beta,
                      Eigen::VectorXd& out) {
    if (!(beta >= 0.0 && beta < 1.0)) throw ParamError("beta must lie in [0, 1)");
    dexp3_estimate_into(q, x, y, o, out);
    out.array() += beta / q.array();
}

ScoreVector hp_estimate(const Eigen::VectorXd& q, int x, int y, int o, double beta) {
    Eigen::VectorXd v;
    hp_estimate_into(q, x, y, o, beta, v);
    return ScoreVector{std::move(v), ScoreKind::estimated};
}

void bcb_estimate_into(int x, int o, int k, Eigen::VectorXd& out) {
    if (k < 2) throw ShapeError("bcb_estimate needs K >= 2");
    check_item(x, k);
    check_outcome(o);
    out.setZero(k);
    out(x) = static_cast<double>(k) * static_cast<double>(o);
}

ScoreVector bcb_estimate(int x, int o, int k) {
    Eigen::VectorXd v;
    bcb_estimate_into(x, o, k, v);
    return ScoreVector{std::move(v), ScoreKind::estimated};
}

void exp_weights_mixture_into(const Eigen::VectorXd& cum_scores, double eta, double gamma,
                              Eigen::VectorXd& out) {
    const int k = static_cast<int>(cum_scores.size());
    if (k < 2) throw ShapeError("exp_weights_mixture needs K >= 2");
    if (!(eta > 0.0)) throw ParamError("eta must be > 0");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ParamError("gamma must lie in (0, 1]");
    Eigen::ArrayXd z = eta * cum_scores.array();
    z -= z.maxCoeff();
    Eigen::ArrayXd w = z.exp();
    out = ((1.0 - gamma) / w.sum()) * w.matrix();
    out.array() += gamma / static_cast<double>(k);
}

Eigen::VectorXd exp_weights_mixture(const Eigen::VectorXd& cum_scores, double eta, double gamma) {
    Eigen::VectorXd q;
    exp_weights_mixture_into(cum_scores, eta, gamma, q);
    return q;
}

double bcb_radius(std::int64_t t, int k, std::int64_t horizon, double delta) {
    if (t < 1) throw ParamError("bcb_radius needs t >= 1");
    if (k < 2) throw ParamError("bcb_radius needs K >= 2");
    if (horizon < 1) throw ParamError("bcb_radius needs T >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw ParamError("delta must lie in (0, 1)");
    const double kd = static_cast<double>(k);
    return 2.0 * std::sqrt((kd / static_cast<double>(t)) *
                           std::log(2.0 * kd * static_cast<double>(horizon) / delta));
}

ConfidenceBounds bcb_bounds(const Eigen::VectorXd& cum_estimates, std::int64_t t, int k,
                            std::int64_t horizon, double delta) {
    if (cum_estimates.size() != k) throw ShapeError("cum_estimates length must equal K");
    const double r = bcb_radius(t, k, horizon, delta);
    Eigen::VectorXd avg = cum_estimates / static_cast<double>(t);
    ConfidenceBounds b;
    b.lcb = avg.array() - r;
    b.ucb = avg.array() + r;
    return b;
}

std::optional<int> bcb_commit_check(const Eigen::VectorXd& lcb, const Eigen::VectorXd& ucb) {
    if (lcb.size() != ucb.size()) throw ShapeError("lcb/ucb length mismatch");
    const int k = static_cast<int>(lcb.size());
    for (int i = 0; i < k; ++i) {
        bool dominates = true;
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            if (!(lcb(i) > ucb(j))) {
                dominates = false;
                break;
            }
        }
        if (dominates) return i;
    }
    return std::nullopt;
}

double bcb_commit_time_bound_raw(int k, std::int64_t horizon, double delta, double gap) {
    if (k < 2) throw ParamError("bcb_commit_time_bound needs K >= 2");
    if (horizon < 1) throw ParamError("bcb_commit_time_bound needs T >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw ParamError("delta must lie in (0, 1)");
    if (!(gap > 0.0 && gap < 1.0)) throw ParamError("gap must lie in (0, 1)");
    const double kd = static_cast<double>(k);
    return 64.0 * kd * std::log(2.0 * kd * static_cast<double>(horizon) / delta) / (gap * gap);
}

std::int64_t bcb_commit_time_bound(int k, std::int64_t horizon, double delta, double gap) {
    return static_cast<std::int64_t>(std::ceil(bcb_commit_time_bound_raw(k, horizon, delta, gap)));
}

std::pair<int, int> uniform_baseline_select(int k, RngStream& rng) {
    if (k < 2) throw ShapeError("uniform_baseline_select needs K >= 2");
    return {rng.uniform_int(k), rng.uniform_int(k)};
}

// ---------------------------------------------------------------------------
// Policy protocol
// ---------------------------------------------------------------------------

std::pair<int, int> Policy::select_pair(RngStream& rng) {
    if (awaiting_observe_)
        throw ProtocolError("select_pair called twice without an observe in between");
    auto pair = do_select(rng);
    awaiting_observe_ = true;
    return pair;
}

void Policy::observe(int x, int y, int o) {
    if (!awaiting_observe_) throw ProtocolError("observe called without a pending select_pair");
    do_observe(x, y, o);
    awaiting_observe_ = false;
    ++round_;
}

// ---------------------------------------------------------------------------
// D-EXP3
// ---------------------------------------------------------------------------

Dexp3Policy::Dexp3Policy(int k, Dexp3Params params) : k_(k), params_(params) {
    if (k < 2) throw ShapeError("dexp3 needs K >= 2");
    if (!(params.eta > 0.0)) throw ParamError("eta must be > 0");
    if (!(params.gamma > 0.0 && params.gamma <= 1.0)) throw ParamError("gamma must lie in (0, 1]");
    cum_scores_ = Eigen::VectorXd::Zero(k);
    q_ = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
}

std::pair<int, int> Dexp3Policy::do_select(RngStream& rng) {
    // Two i.i.d. draws with replacement; x = y is legal.
    const int x = rng.categorical(q_);
    const int y = rng.categorical(q_);
    return {x, y};
}

void Dexp3Policy::do_observe(int x, int y, int o) {
    dexp3_estimate_into(q_, x, y, o, estimate_buf_);
    cum_scores_ += estimate_buf_;
    exp_weights_mixture_into(cum_scores_, params_.eta, params_.gamma, q_);
}

nlohmann::json Dexp3Policy::state_snapshot() const {
    return {{"policy", name()},
            {"t", round()},
            {"eta", params_.eta},
            {"gamma", params_.gamma},
            {"q", std::vector<double>(q_.begin(), q_.end())},
            {"cum_scores", std::vector<double>(cum_scores_.begin(), cum_scores_.end())}};
}

// ---------------------------------------------------------------------------
// D-EXP3, high-probability variant
// ---------------------------------------------------------------------------

Dexp3HpPolicy::Dexp3HpPolicy(int k, HpParams params, double delta)
    : k_(k), params_(params), delta_(delta) {
    if (k < 2) throw ShapeError("dexp3_hp needs K >= 2");
    if (!(params.eta > 0.0)) throw ParamError("eta must be > 0");
    if (!(params.gamma > 0.0 && params.gamma <= 1.0)) throw ParamError("gamma must lie in (0, 1]");
    if (!(params.beta > 0.0 && params.beta < 1.0)) throw ParamError("beta must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw ParamError("delta must lie in (0, 1)");
    cum_scores_ = Eigen::VectorXd::Zero(k);
    q_ = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
}

std::pair<int, int> Dexp3HpPolicy::do_select(RngStream& rng) {
    const int x = rng.categorical(q_);
    const int y = rng.categorical(q_);
    return {x, y};
}

void Dexp3HpPolicy::do_observe(int x, int y, int o) {
    hp_estimate_into(q_, x, y, o, params_.beta, estimate_buf_);
    cum_scores_ += estimate_buf_;
    exp_weights_mixture_into(cum_scores_, params_.eta, params_.gamma, q_);
}

nlohmann::json Dexp3HpPolicy::state_snapshot() const {
    return {{"policy", name()},
            {"t", round()},
            {"eta", params_.eta},
            {"gamma", params_.gamma},
            {"beta", params_.beta},
            {"delta", delta_},
            {"q", std::vector<double>(q_.begin(), q_.end())},
            {"cum_scores", std::vector<double>(cum_scores_.begin(), cum_scores_.end())}};
}

// ---------------------------------------------------------------------------
// Borda-Confidence-Bound
// ---------------------------------------------------------------------------

BcbPolicy::BcbPolicy(int k, std::int64_t horizon, double delta, bool clamp_bounds)
    : k_(k), horizon_(horizon), delta_(delta), clamp_bounds_(clamp_bounds) {
    if (k < 2) throw ShapeError("bcb needs K >= 2");
    if (horizon < 1) throw ParamError("bcb needs T >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw ParamError("delta must lie in (0, 1)");
    cum_estimates_ = Eigen::VectorXd::Zero(k);
}

std::pair<int, int> BcbPolicy::do_select(RngStream& rng) {
    if (committed_) return {*committed_, *committed_};
    // Ordered pair: x uniform over [K], y uniform over the rest, so
    // Pr(x = i) = 1/K matches the estimator's normalization.
    const int x = rng.uniform_int(k_);
    int y = rng.uniform_int(k_ - 1);
    if (y >= x) ++y;
    return {x, y};
}

void BcbPolicy::do_observe(int x, int y, int o) {
    if (committed_) return;  // state is frozen after the commit round
    check_item(x, k_);
    check_item(y, k_);
    check_outcome(o);
    cum_estimates_(x) += static_cast<double>(k_) * static_cast<double>(o);
    const std::int64_t t = round() + 1;
    ConfidenceBounds b = bcb_bounds(cum_estimates_, t, k_, horizon_, delta_);
    if (clamp_bounds_) {
        b.lcb = b.lcb.cwiseMax(0.0).cwiseMin(1.0);
        b.ucb = b.ucb.cwiseMax(0.0).cwiseMin(1.0);
    }
    if (auto hit = bcb_commit_check(b.lcb, b.ucb)) {
        committed_ = *hit;
        commit_round_ = t;
    }
}

nlohmann::json BcbPolicy::state_snapshot() const {
    nlohmann::json j{{"policy", name()},
                     {"t", round()},
                     {"delta", delta_},
                     {"cum_estimates",
                      std::vector<double>(cum_estimates_.begin(), cum_estimates_.end())}};
    j["committed"] = committed_ ? nlohmann::json(*committed_ + 1) : nlohmann::json();
    j["commit_round"] = commit_round_ ? nlohmann::json(*commit_round_) : nlohmann::json();
    return j;
}

// ---------------------------------------------------------------------------
// Uniform baseline
// ---------------------------------------------------------------------------

UniformPolicy::UniformPolicy(int k) : k_(k) {
    if (k < 2) throw ShapeError("uniform baseline needs K >= 2");
}

std::pair<int, int> UniformPolicy::do_select(RngStream& rng) {
    return uniform_baseline_select(k_, rng);
}

void UniformPolicy::do_observe(int x, int y, int o) {
    check_item(x, k_);
    check_item(y, k_);
    check_outcome(o);
}

nlohmann::json UniformPolicy::state_snapshot() const {
    return {{"policy", name()}, {"t", round()}};
}

}  // namespace duelbench
