#include "duelbench/preference.hpp"

#include <cmath>
#include <string>

namespace duelbench {

PreferenceMatrix PreferenceMatrix::validated(Eigen::MatrixXd p) {
    const Eigen::Index rows = p.rows();
    const Eigen::Index cols = p.cols();
    if (rows != cols)
        throw ShapeError("preference matrix must be square, got " + std::to_string(rows) +
                         "x" + std::to_string(cols));
    if (rows < 2) throw ShapeError("preference matrix needs K >= 2 items");

    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double v = p(i, j);
            if (!(v >= 0.0 && v <= 1.0))
                throw RangeError("entry (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ") = " + std::to_string(v) +
                                 " outside [0,1]");
        }
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (p(i, i) != 0.5)
            throw DiagonalError("diagonal entry (" + std::to_string(i + 1) + "," +
                                std::to_string(i + 1) + ") must be exactly 0.5");
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = i + 1; j < cols; ++j) {
            if (std::abs(p(i, j) + p(j, i) - 1.0) > kMatrixTolerance)
                throw AsymmetryError("p(" + std::to_string(i + 1) + "," +
                                     std::to_string(j + 1) + ") + transpose = " +
                                     std::to_string(p(i, j) + p(j, i)) + ", expected 1");
        }
    }
    return PreferenceMatrix(std::move(p));
}

PreferenceMatrix PreferenceMatrix::repaired(Eigen::MatrixXd p) {
    if (p.rows() != p.cols())
        throw ShapeError("preference matrix must be square");
    Eigen::MatrixXd fixed =
        0.5 * (p + (Eigen::MatrixXd::Ones(p.rows(), p.cols()) - p.transpose()));
    return validated(std::move(fixed));
}

ScoreVector borda_scores(const PreferenceMatrix& m) {
    const double k = static_cast<double>(m.items());
    // Row sums include the diagonal 1/2, which the Borda score excludes.
    Eigen::VectorXd v = (m.raw().rowwise().sum().array() - 0.5) / (k - 1.0);
    return ScoreVector{std::move(v), ScoreKind::borda};
}

ScoreVector shifted_scores(const PreferenceMatrix& m) {
    const double k = static_cast<double>(m.items());
    Eigen::VectorXd v = m.raw().rowwise().sum() / k;
    return ScoreVector{std::move(v), ScoreKind::shifted};
}

double regret_increment(const ScoreVector& scores, int i_star, int x, int y) {
    const int k = scores.items();
    auto check = [k](int i) {
        if (i < 0 || i >= k)
            throw IndexError("item index out of range: " + std::to_string(i + 1));
    };
    check(i_star);
    check(x);
    check(y);
    return scores.values(i_star) - 0.5 * (scores.values(x) + scores.values(y));
}

int hindsight_best(const Eigen::VectorXd& cumulative) {
    if (cumulative.size() == 0) throw ParamError("hindsight_best: empty score array");
    int best = 0;
    for (Eigen::Index i = 1; i < cumulative.size(); ++i) {
        if (cumulative(i) > cumulative(best)) best = static_cast<int>(i);
    }
    return best;
}

}  // namespace duelbench
