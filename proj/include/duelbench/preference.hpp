#pragma once

#include <Eigen/Dense>

#include "duelbench/errors.hpp"

namespace duelbench {

// Absolute tolerance for the pairwise-complement check p(i,j) + p(j,i) = 1.
inline constexpr double kMatrixTolerance = 1e-12;

// One round's K x K pairwise win-probability matrix. Entry (i, j) is the
// probability that item i beats item j. Invariants, enforced at
// construction: square with K >= 2, entries in [0,1], diagonal exactly 1/2,
// p(i,j) + p(j,i) = 1 within kMatrixTolerance. Immutable afterwards.
// Items are 0-based internally; all I/O surfaces are 1-based.
class PreferenceMatrix {
public:
    // Validates and adopts a raw matrix. Throws ShapeError, RangeError,
    // DiagonalError or AsymmetryError.
    static PreferenceMatrix validated(Eigen::MatrixXd p);

    // Repair mode: symmetrize via p <- (p + (1 - p^T)) / 2, then validate.
    // Off by default everywhere; file loaders opt in explicitly.
    static PreferenceMatrix repaired(Eigen::MatrixXd p);

    int items() const { return static_cast<int>(p_.rows()); }

    double prob(int i, int j) const {
        check_index(i);
        check_index(j);
        return p_(i, j);
    }

    const Eigen::MatrixXd& raw() const { return p_; }

    void check_index(int i) const {
        if (i < 0 || i >= items())
            throw IndexError("item index out of range: " + std::to_string(i + 1));
    }

private:
    explicit PreferenceMatrix(Eigen::MatrixXd p) : p_(std::move(p)) {}
    Eigen::MatrixXd p_;
};

enum class ScoreKind { borda, shifted, estimated };

// Length-K score vector tagged with its meaning. borda/shifted values live
// in [0,1]; estimated values are importance-weighted and may exceed 1.
struct ScoreVector {
    Eigen::VectorXd values;
    ScoreKind kind = ScoreKind::borda;

    int items() const { return static_cast<int>(values.size()); }
};

// b(i) = (1/(K-1)) * sum_{j != i} p(i,j): the chance item i beats a
// uniformly random *other* item.
ScoreVector borda_scores(const PreferenceMatrix& m);

// s(i) = (1/K) * sum_j p(i,j); equivalently ((K-1) * b(i) + 1/2) / K.
// Same argmax as the Borda score, differences scaled by (K-1)/K.
ScoreVector shifted_scores(const PreferenceMatrix& m);

// One-round regret term b(i_star) - (b(x) + b(y)) / 2. May be negative when
// i_star is a hindsight (not per-round) winner. Items 0-based.
double regret_increment(const ScoreVector& scores, int i_star, int x, int y);

// Index of the maximum cumulative score; ties break to the lowest index.
int hindsight_best(const Eigen::VectorXd& cumulative);

}  // namespace duelbench
