#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace duelbench {

// Neumaier-compensated scalar accumulator. Cumulative regret and per-item
// score sums run to 1e7 rounds; plain doubles drift enough to destabilize
// hindsight argmax ties.
class KahanSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

    void reset() { sum_ = comp_ = 0.0; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Elementwise compensated accumulator over a fixed-length vector.
class KahanVector {
public:
    explicit KahanVector(Eigen::Index n)
        : sum_(Eigen::VectorXd::Zero(n)), comp_(Eigen::VectorXd::Zero(n)) {}

    void add(const Eigen::VectorXd& v) {
        for (Eigen::Index i = 0; i < sum_.size(); ++i) {
            const double s = sum_(i);
            const double x = v(i);
            const double t = s + x;
            if (std::abs(s) >= std::abs(x)) {
                comp_(i) += (s - t) + x;
            } else {
                comp_(i) += (x - t) + s;
            }
            sum_(i) = t;
        }
    }

    Eigen::VectorXd value() const { return sum_ + comp_; }

    Eigen::Index size() const { return sum_.size(); }

private:
    Eigen::VectorXd sum_;
    Eigen::VectorXd comp_;
};

}  // namespace duelbench
