#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "duelbench/preference.hpp"
#include "duelbench/random.hpp"

namespace duelbench {

// Outcome of scanning a stream's running-average Borda gaps.
struct FixedGapCertificate {
    int i_star = 0;                     // 0-based
    double delta = 0.0;                 // gap the scan was checked against
    double min_observed_gap = 0.0;      // min over t, j != i_star of avg-gap
    std::int64_t verified_through = 0;  // last round the condition held
    bool valid = false;                 // min_observed_gap >= delta over all T
};

// An obliviously fixed sequence of preference matrices. The whole sequence
// is determined at construction: matrix_at(t) is a pure function of t with
// no feedback channel, so repeated calls agree bit-for-bit and instances can
// be shared across threads.
class EnvironmentStream {
public:
    virtual ~EnvironmentStream() = default;

    int items() const { return k_; }
    std::int64_t horizon() const { return horizon_; }
    const std::string& label() const { return label_; }

    // t is 1-based; outside [1, T] throws HorizonError.
    PreferenceMatrix matrix_at(std::int64_t t) const;

    virtual bool stationary() const { return false; }

protected:
    EnvironmentStream(int k, std::int64_t horizon, std::string label);
    virtual PreferenceMatrix generate(std::int64_t t) const = 0;

private:
    int k_;
    std::int64_t horizon_;
    std::string label_;
};

class StationaryEnvironment final : public EnvironmentStream {
public:
    StationaryEnvironment(PreferenceMatrix base, std::int64_t horizon, std::string label);
    bool stationary() const override { return true; }
    const PreferenceMatrix& base() const { return base_; }

protected:
    PreferenceMatrix generate(std::int64_t) const override { return base_; }

private:
    PreferenceMatrix base_;
};

// File-backed stream replaying a fixed list of matrices, optionally cycling.
class FileEnvironment final : public EnvironmentStream {
public:
    FileEnvironment(std::vector<PreferenceMatrix> matrices, bool cycle, std::int64_t horizon,
                    std::string label);

protected:
    PreferenceMatrix generate(std::int64_t t) const override;

private:
    std::vector<PreferenceMatrix> matrices_;
    bool cycle_;
};

// Drifting stream: fixed base matrix plus seeded, antisymmetry-preserving
// per-round noise on off-diagonal pairs, clamped to [0.02, 0.98].
class DriftingEnvironment final : public EnvironmentStream {
public:
    DriftingEnvironment(Eigen::MatrixXd base, double perturbation_scale, std::uint64_t seed,
                        std::int64_t horizon, std::string label);
    bool stationary() const override { return perturbation_scale_ == 0.0; }

protected:
    PreferenceMatrix generate(std::int64_t t) const override;

private:
    Eigen::MatrixXd base_;
    double perturbation_scale_;
    std::uint64_t seed_;
};

// Constant stream repeating one matrix for T rounds.
std::shared_ptr<EnvironmentStream> stationary_env(PreferenceMatrix m, std::int64_t horizon);

// Block instance with K/2 "good" and K/2 "bad" items: 0.5 within blocks,
// 0.9 good-vs-bad. m = 0 leaves all good items tied; m in {1..K/2} upgrades
// good item m (1-based) to 0.9 + epsilon against every bad item, making it
// the unique winner. Requires K even, K >= 4, epsilon in (0, 0.1].
PreferenceMatrix lower_bound_instance(int k, double epsilon, int m);

// Adversary's horizon-tuned perturbation: min(0.1, c * (K/T)^(1/3)).
double tuned_epsilon(int k, std::int64_t horizon, double c = 1.0);

// Generate-then-verify construction of a fixed-gap stream: item 1 gets an
// instantaneous Borda advantage of 2*delta over every other item, then
// seeded bounded drift is layered on top. The returned certificate comes
// from a full check_fixed_gap scan; a failed scan throws GapViolation.
std::pair<std::shared_ptr<EnvironmentStream>, FixedGapCertificate> fixed_gap_env(
    int k, double delta, std::int64_t horizon, double perturbation_scale, std::uint64_t seed);

// Scans t = 1..T maintaining running-average Borda scores; records the
// minimum of avg_b(i_star) - avg_b(j) over all t and j != i_star.
FixedGapCertificate check_fixed_gap(const EnvironmentStream& stream, int i_star, double delta);

// Bernoulli comparison draw: returns 1 when x beats y (prob p(x,y)).
int sample_feedback(const PreferenceMatrix& m, int x, int y, RngStream& rng);

}  // namespace duelbench
