#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include <json.hpp>

#include "duelbench/preference.hpp"
#include "duelbench/random.hpp"

namespace duelbench {

// ---------------------------------------------------------------------------
// Parameter schedules
// ---------------------------------------------------------------------------

struct Dexp3Params {
    double eta = 0.0;
    double gamma = 0.0;
    std::string warning;  // empty unless the horizon is below the validated range
};

// eta = (ln K / (T sqrt(K)))^(2/3), gamma = sqrt(eta K). Throws ParamError
// when gamma > 1 (horizon too short for the schedule); warns (not errors)
// when T < K ln K.
Dexp3Params dexp3_default_params(int k, std::int64_t horizon);

struct HpParams {
    double eta = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
    std::string warning;
};

// eta = (ln K / (T sqrt(2K)))^(2/3), gamma = sqrt(2 eta K),
// beta = sqrt(ln(K/delta)) / (sqrt(T) (2 eta)^(1/4) K^(3/4)).
HpParams hp_default_params(int k, std::int64_t horizon, double delta);

// ---------------------------------------------------------------------------
// Estimators (importance-weighted score estimates)
// ---------------------------------------------------------------------------

// s~(i) = 1(x = i) / (K q(i)) * 1(y = j) o / q(j): zero vector when o = 0,
// otherwise a single spike 1 / (K q(x) q(y)) at coordinate x.
void dexp3_estimate_into(const Eigen::VectorXd& q, int x, int y, int o, Eigen::VectorXd& out);
ScoreVector dexp3_estimate(const Eigen::VectorXd& q, int x, int y, int o);

// s'(i) = s~(i) + beta / q(i): the D-EXP3 spike plus a bias floor on every
// coordinate.
void hp_estimate_into(const Eigen::VectorXd& q, int x, int y, int o, double beta,
                      Eigen::VectorXd& out);
ScoreVector hp_estimate(const Eigen::VectorXd& q, int x, int y, int o, double beta);

// b^(i) = K o 1(x = i).
void bcb_estimate_into(int x, int o, int k, Eigen::VectorXd& out);
ScoreVector bcb_estimate(int x, int o, int k);

// ---------------------------------------------------------------------------
// Exponential-weights distribution
// ---------------------------------------------------------------------------

// q(i) = (1 - gamma) * softmax(eta * cum)(i) + gamma / K, with the softmax
// computed after subtracting max_i(eta * cum(i)) so overflow is unreachable.
// Adding any constant to all cumulative scores leaves the result unchanged.
void exp_weights_mixture_into(const Eigen::VectorXd& cum_scores, double eta, double gamma,
                              Eigen::VectorXd& out);
Eigen::VectorXd exp_weights_mixture(const Eigen::VectorXd& cum_scores, double eta, double gamma);

// ---------------------------------------------------------------------------
// BCB confidence machinery
// ---------------------------------------------------------------------------

// radius(t) = 2 sqrt((K/t) ln(2KT/delta)).
double bcb_radius(std::int64_t t, int k, std::int64_t horizon, double delta);

struct ConfidenceBounds {
    Eigen::VectorXd lcb;
    Eigen::VectorXd ucb;
};

// Averages cum_estimates / t and widens by bcb_radius. Intervals are NOT
// clamped to [0,1]; BcbPolicy exposes clamping as an off-by-default option.
ConfidenceBounds bcb_bounds(const Eigen::VectorXd& cum_estimates, std::int64_t t, int k,
                            std::int64_t horizon, double delta);

// The unique item whose LCB strictly exceeds every other item's UCB, if one
// exists. The strict-inequality structure admits at most one such item.
std::optional<int> bcb_commit_check(const Eigen::VectorXd& lcb, const Eigen::VectorXd& ucb);

// Analytic round by which BCB commits on a valid fixed-gap instance:
// ceil(64 K ln(2KT/delta) / gap^2). Diagnostic value used by the harness.
std::int64_t bcb_commit_time_bound(int k, std::int64_t horizon, double delta, double gap);
double bcb_commit_time_bound_raw(int k, std::int64_t horizon, double delta, double gap);

// Control policy: two independent uniform draws over [K]; x = y allowed.
std::pair<int, int> uniform_baseline_select(int k, RngStream& rng);

// ---------------------------------------------------------------------------
// Sequential policies
// ---------------------------------------------------------------------------

// Behavioral contract: select_pair and observe strictly alternate, starting
// with select_pair; violations throw ProtocolError. Policies see only
// (x, y, o) tuples, never ground-truth scores. Single-writer state machines:
// safe to move between threads between rounds, not to mutate concurrently.
class Policy {
public:
    virtual ~Policy() = default;

    std::pair<int, int> select_pair(RngStream& rng);
    void observe(int x, int y, int o);

    // Completed rounds (select + observe pairs).
    std::int64_t round() const { return round_; }

    virtual std::string name() const = 0;
    virtual nlohmann::json state_snapshot() const = 0;

protected:
    virtual std::pair<int, int> do_select(RngStream& rng) = 0;
    virtual void do_observe(int x, int y, int o) = 0;

private:
    std::int64_t round_ = 0;
    bool awaiting_observe_ = false;
};

class Dexp3Policy final : public Policy {
public:
    Dexp3Policy(int k, Dexp3Params params);

    const Eigen::VectorXd& weights() const { return q_; }
    const Eigen::VectorXd& cumulative_scores() const { return cum_scores_; }
    double eta() const { return params_.eta; }
    double gamma() const { return params_.gamma; }

    std::string name() const override { return "dexp3"; }
    nlohmann::json state_snapshot() const override;

protected:
    std::pair<int, int> do_select(RngStream& rng) override;
    void do_observe(int x, int y, int o) override;

private:
    int k_;
    Dexp3Params params_;
    Eigen::VectorXd cum_scores_;
    Eigen::VectorXd q_;
    Eigen::VectorXd estimate_buf_;
};

class Dexp3HpPolicy final : public Policy {
public:
    Dexp3HpPolicy(int k, HpParams params, double delta);

    const Eigen::VectorXd& weights() const { return q_; }
    double beta() const { return params_.beta; }
    double gamma() const { return params_.gamma; }

    std::string name() const override { return "dexp3_hp"; }
    nlohmann::json state_snapshot() const override;

protected:
    std::pair<int, int> do_select(RngStream& rng) override;
    void do_observe(int x, int y, int o) override;

private:
    int k_;
    HpParams params_;
    double delta_;
    Eigen::VectorXd cum_scores_;
    Eigen::VectorXd q_;
    Eigen::VectorXd estimate_buf_;
};

class BcbPolicy final : public Policy {
public:
    BcbPolicy(int k, std::int64_t horizon, double delta, bool clamp_bounds = false);

    std::optional<int> committed() const { return committed_; }
    std::optional<std::int64_t> commit_round() const { return commit_round_; }
    const Eigen::VectorXd& cumulative_estimates() const { return cum_estimates_; }

    std::string name() const override { return "bcb"; }
    nlohmann::json state_snapshot() const override;

protected:
    std::pair<int, int> do_select(RngStream& rng) override;
    void do_observe(int x, int y, int o) override;

private:
    int k_;
    std::int64_t horizon_;
    double delta_;
    bool clamp_bounds_;
    Eigen::VectorXd cum_estimates_;
    std::optional<int> committed_;
    std::optional<std::int64_t> commit_round_;
};

class UniformPolicy final : public Policy {
public:
    explicit UniformPolicy(int k);

    std::string name() const override { return "uniform"; }
    nlohmann::json state_snapshot() const override;

protected:
    std::pair<int, int> do_select(RngStream& rng) override;
    void do_observe(int x, int y, int o) override;

private:
    int k_;
};

}  // namespace duelbench
