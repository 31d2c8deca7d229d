#include "duelbench/environment.hpp"

#include <algorithm>
#include <cmath>

#include "duelbench/summation.hpp"

namespace duelbench {

EnvironmentStream::EnvironmentStream(int k, std::int64_t horizon, std::string label)
    : k_(k), horizon_(horizon), label_(std::move(label)) {
    if (k < 2) throw ShapeError("environment needs K >= 2 items");
    if (horizon < 1) throw ParamError("horizon must be >= 1");
}

PreferenceMatrix EnvironmentStream::matrix_at(std::int64_t t) const {
    if (t < 1 || t > horizon_)
        throw HorizonError("round " + std::to_string(t) + " outside horizon [1, " +
                           std::to_string(horizon_) + "]");
    return generate(t);
}

StationaryEnvironment::StationaryEnvironment(PreferenceMatrix base, std::int64_t horizon,
                                             std::string label)
    : EnvironmentStream(base.items(), horizon, std::move(label)), base_(std::move(base)) {}

FileEnvironment::FileEnvironment(std::vector<PreferenceMatrix> matrices, bool cycle,
                                 std::int64_t horizon, std::string label)
    : EnvironmentStream(matrices.empty() ? 2 : matrices.front().items(), horizon,
                        std::move(label)),
      matrices_(std::move(matrices)),
      cycle_(cycle) {
    if (matrices_.empty()) throw ParamError("sequence has no matrices");
    for (const auto& m : matrices_) {
        if (m.items() != items()) throw ShapeError("sequence mixes different K");
    }
    if (!cycle_ && static_cast<std::int64_t>(matrices_.size()) < horizon)
        throw HorizonError("sequence holds " + std::to_string(matrices_.size()) +
                           " matrices for horizon " + std::to_string(horizon) +
                           " and does not declare cycling");
}

PreferenceMatrix FileEnvironment::generate(std::int64_t t) const {
    const std::size_t n = matrices_.size();
    const std::size_t idx = static_cast<std::size_t>((t - 1) % static_cast<std::int64_t>(n));
    return matrices_[idx];
}

DriftingEnvironment::DriftingEnvironment(Eigen::MatrixXd base, double perturbation_scale,
                                         std::uint64_t seed, std::int64_t horizon,
                                         std::string label)
    : EnvironmentStream(static_cast<int>(base.rows()), horizon, std::move(label)),
      base_(std::move(base)),
      perturbation_scale_(perturbation_scale),
      seed_(seed) {
    if (perturbation_scale < 0.0) throw ParamError("perturbation_scale must be >= 0");
    PreferenceMatrix::validated(base_);  // base must already be a valid matrix
}

PreferenceMatrix DriftingEnvironment::generate(std::int64_t t) const {
    if (perturbation_scale_ == 0.0) return PreferenceMatrix::validated(base_);
    const int k = items();
    Eigen::MatrixXd p = base_;
    // One deterministic sub-stream per round keeps generation lazy: O(K^2)
    // work and memory regardless of t.
    RngStream rng(derive_stream(seed_, static_cast<std::uint64_t>(t)));
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            const double noise = (2.0 * rng.uniform01() - 1.0) * perturbation_scale_;
            const double v = std::clamp(base_(i, j) + noise, 0.02, 0.98);
            p(i, j) = v;
            p(j, i) = 1.0 - v;
        }
    }
    return PreferenceMatrix::validated(std::move(p));
}

std::shared_ptr<EnvironmentStream> stationary_env(PreferenceMatrix m, std::int64_t horizon) {
    return std::make_shared<StationaryEnvironment>(std::move(m), horizon, "stationary");
}

PreferenceMatrix lower_bound_instance(int k, double epsilon, int m) {
    if (k < 4) throw ParamError("lower-bound instance needs K >= 4");
    if (k % 2 != 0) throw ParamError("lower-bound instance needs even K");
    if (!(epsilon > 0.0 && epsilon <= 0.1))
        throw ParamError("epsilon must lie in (0, 0.1], got " + std::to_string(epsilon));
    const int half = k / 2;
    if (m < 0 || m > half)
        throw ParamError("perturbation index m must lie in {0..K/2}, got " + std::to_string(m));

    Eigen::MatrixXd p = Eigen::MatrixXd::Constant(k, k, 0.5);
    for (int i = 0; i < half; ++i) {
        for (int j = half; j < k; ++j) {
            p(i, j) = 0.9;
            p(j, i) = 0.1;
        }
    }
    if (m >= 1) {
        const int row = m - 1;  // m is the 1-based good-item label
        for (int j = half; j < k; ++j) {
            p(row, j) = 0.9 + epsilon;
            p(j, row) = 0.1 - epsilon;
        }
    }
    return PreferenceMatrix::validated(std::move(p));
}

double tuned_epsilon(int k, std::int64_t horizon, double c) {
    if (k < 2) throw ParamError("tuned_epsilon needs K >= 2");
    if (horizon < k) throw ParamError("tuned_epsilon needs T >= K");
    const double raw = c * std::cbrt(static_cast<double>(k) / static_cast<double>(horizon));
    return std::min(0.1, raw);
}

std::pair<std::shared_ptr<EnvironmentStream>, FixedGapCertificate> fixed_gap_env(
    int k, double delta, std::int64_t horizon, double perturbation_scale, std::uint64_t seed) {
    if (k < 2) throw ParamError("fixed_gap_env needs K >= 2");
    if (!(delta > 0.0 && delta < 0.5)) throw ParamError("delta must lie in (0, 0.5)");
    // Boost row 1 so its instantaneous Borda gap over every other item is
    // exactly 2*delta: gap = a * K / (K - 1) with p(1, j) = 0.5 + a.
    const double a = 2.0 * delta * (k - 1) / static_cast<double>(k);
    if (0.5 + a > 0.98)
        throw ParamError("delta too large for the clamped construction (entries exceed 0.98)");
    Eigen::MatrixXd base = Eigen::MatrixXd::Constant(k, k, 0.5);
    for (int j = 1; j < k; ++j) {
        base(0, j) = 0.5 + a;
        base(j, 0) = 0.5 - a;
    }
    auto env = std::make_shared<DriftingEnvironment>(std::move(base), perturbation_scale, seed,
                                                     horizon, "fixed_gap");
    FixedGapCertificate cert = check_fixed_gap(*env, 0, delta);
    if (!cert.valid)
        throw GapViolation("fixed-gap construction failed its certificate at round " +
                           std::to_string(cert.verified_through + 1) + " (min gap " +
                           std::to_string(cert.min_observed_gap) + " < " +
                           std::to_string(delta) + ")");
    return {std::move(env), cert};
}

FixedGapCertificate check_fixed_gap(const EnvironmentStream& stream, int i_star, double delta) {
    const int k = stream.items();
    if (i_star < 0 || i_star >= k) throw IndexError("i_star out of range");

    FixedGapCertificate cert;
    cert.i_star = i_star;
    cert.delta = delta;
    cert.min_observed_gap = std::numeric_limits<double>::infinity();

    KahanVector cum(k);
    std::int64_t first_violation = 0;

    if (stream.stationary()) {
        // Running averages equal the instantaneous scores at every t.
        const Eigen::VectorXd b = borda_scores(stream.matrix_at(1)).values;
        for (int j = 0; j < k; ++j) {
            if (j == i_star) continue;
            cert.min_observed_gap = std::min(cert.min_observed_gap, b(i_star) - b(j));
        }
        cert.valid = cert.min_observed_gap >= delta;
        cert.verified_through = cert.valid ? stream.horizon() : 0;
        return cert;
    }

    for (std::int64_t t = 1; t <= stream.horizon(); ++t) {
        cum.add(borda_scores(stream.matrix_at(t)).values);
        const Eigen::VectorXd avg = cum.value() / static_cast<double>(t);
        double round_min = std::numeric_limits<double>::infinity();
        for (int j = 0; j < k; ++j) {
            if (j == i_star) continue;
            round_min = std::min(round_min, avg(i_star) - avg(j));
        }
        cert.min_observed_gap = std::min(cert.min_observed_gap, round_min);
        if (round_min < delta && first_violation == 0) first_violation = t;
    }
    cert.valid = first_violation == 0;
    cert.verified_through = cert.valid ? stream.horizon() : first_violation - 1;
    return cert;
}

int sample_feedback(const PreferenceMatrix& m, int x, int y, RngStream& rng) {
    m.check_index(x);
    m.check_index(y);
    return rng.bernoulli(m.raw()(x, y));
}

}  // namespace duelbench
