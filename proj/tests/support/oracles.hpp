#pragma once

// Independent brute-force and Monte-Carlo oracles for the test suite. These
// re-derive every formula they need locally (scores, sampling, softmax,
// confidence bounds) and share no estimator code with the library, so
// agreement is a genuine two-route check.

#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "duelbench/policy.hpp"
#include "duelbench/preference.hpp"

namespace duelbench::oracle {

// Direct double-loop score targets (no library score code).
Eigen::VectorXd target_borda(const PreferenceMatrix& m);
Eigen::VectorXd target_shifted(const PreferenceMatrix& m);

enum class EstimatorKind { dexp3, hp, bcb };

// Optional override for the comparison outcome; used to inject degenerate
// feedback (e.g. o identically 0).
using OutcomeFn = std::function<int(int x, int y, RngStream& rng)>;

struct McMoments {
    Eigen::VectorXd mean;
    Eigen::VectorXd stderr_of_mean;
    std::int64_t samples = 0;
};

// N simulated rounds with frozen q (dexp3/hp) or the uniform ordered x != y
// scheme (bcb); per-coordinate empirical mean and standard error of the
// named *implementation* estimator. beta feeds the hp estimator only.
McMoments mc_expectation(EstimatorKind kind, const PreferenceMatrix& m,
                         const Eigen::VectorXd& q, double beta, std::int64_t n,
                         std::uint64_t seed, const OutcomeFn& outcome = {});

struct McScalar {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
};

// Monte-Carlo estimate of sum_i q(i) E[s~(i)^2] for the dexp3 estimator;
// callers compare against K/gamma. Requires min q >= gamma/K (the lemma's
// hypothesis) and N >= 1e4.
McScalar mc_second_moment(const PreferenceMatrix& m, const Eigen::VectorXd& q, double gamma,
                          std::int64_t n, std::uint64_t seed, const OutcomeFn& outcome = {});

struct TinyCheck {
    double expected_regret = 0.0;
    double path_probability = 0.0;  // must total 1 within 1e-12
};

// Exact E[R_T] for K = 2, T <= 4 by enumerating every (action, outcome)
// path, weighting actions by the policy's analytically derived probabilities
// (exponential weights for "dexp3", uniform-until-commit for "bcb").
TinyCheck exhaustive_tiny_check(const std::string& policy_kind, const PreferenceMatrix& m,
                                int horizon, const Dexp3Params& dexp3_params,
                                double bcb_delta = 0.05);

}  // namespace duelbench::oracle
