#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "duelbench/errors.hpp"

namespace duelbench {

// SplitMix64 step; used to spread seeds into well-mixed engine states.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives the seed for a named sub-stream of a root seed. Each run owns one
// root seed; feedback and policy randomness live on separate streams so a
// policy swap never perturbs the environment's draws.
inline std::uint64_t derive_stream(std::uint64_t root, std::uint64_t stream_id) {
    std::uint64_t s = root;
    std::uint64_t a = splitmix64(s);
    s ^= 0x632be59bd9b4e019ULL * (stream_id + 1);
    return a ^ splitmix64(s);
}

inline constexpr std::uint64_t kFeedbackStream = 1;
inline constexpr std::uint64_t kPolicyStream = 2;

// Seeded random stream. All draws are built from the raw mt19937_64 output
// (standardized across platforms), so sequences are bit-stable for a given
// seed regardless of standard-library internals.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(mix(seed)) {}

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Bernoulli draw; p = 1 always wins, p = 0 never does.
    int bernoulli(double p) { return uniform01() < p ? 1 : 0; }

    // Uniform integer in [0, n); rejection sampling on the high bits.
    int uniform_int(int n) {
        if (n <= 0) throw ParamError("uniform_int: n must be positive");
        const std::uint64_t un = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / un * un;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return static_cast<int>(v % un);
    }

    // Categorical draw from a probability vector via CDF scan.
    int categorical(const Eigen::VectorXd& q) {
        const double u = uniform01();
        double cum = 0.0;
        const Eigen::Index n = q.size();
        for (Eigen::Index i = 0; i < n; ++i) {
            cum += q(i);
            if (u < cum) return static_cast<int>(i);
        }
        return static_cast<int>(n - 1);  // guards cum rounding below 1
    }

    std::mt19937_64& engine() { return engine_; }

private:
    static std::uint64_t mix(std::uint64_t seed) {
        std::uint64_t s = seed;
        return splitmix64(s);
    }
    std::mt19937_64 engine_;
};

}  // namespace duelbench
