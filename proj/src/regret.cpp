#include "duelbench/regret.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace duelbench {

RegretTrace::RegretTrace(int k, std::int64_t horizon, std::vector<std::int64_t> checkpoints)
    : k_(k),
      horizon_(horizon),
      checkpoints_(std::move(checkpoints)),
      cum_borda_(k),
      cum_shifted_(k) {
    if (k < 2) throw ShapeError("trace needs K >= 2");
    if (horizon < 1) throw ParamError("trace needs T >= 1");
    for (std::size_t i = 0; i < checkpoints_.size(); ++i) {
        const std::int64_t c = checkpoints_[i];
        if (c < 1 || c > horizon_)
            throw ParamError("checkpoint " + std::to_string(c) + " outside [1, T]");
        if (i > 0 && c <= checkpoints_[i - 1])
            throw ParamError("checkpoints must be strictly ascending");
    }
    snapshots_.reserve(checkpoints_.size());
}

void RegretTrace::record_round(const ScoreVector& b, const ScoreVector& s, int x, int y, int o) {
    if (t_ >= horizon_)
        throw HorizonError("trace already holds all " + std::to_string(horizon_) + " rounds");
    if (b.items() != k_ || s.items() != k_) throw ShapeError("score vector length must equal K");
    if (x < 0 || x >= k_ || y < 0 || y >= k_) throw IndexError("played item out of range");

    ++t_;
    cum_borda_.add(b.values);
    cum_shifted_.add(s.values);
    pair_borda_.add(0.5 * (b.values(x) + b.values(y)));
    pair_shifted_.add(0.5 * (s.values(x) + s.values(y)));

    if (next_checkpoint_ < checkpoints_.size() && t_ == checkpoints_[next_checkpoint_]) {
        snapshots_.push_back(Snapshot{t_, x, y, o, cum_borda_.value(), cum_shifted_.value(),
                                      b.values, pair_borda_.value(), pair_shifted_.value()});
        ++next_checkpoint_;
    }
}

std::size_t RegretTrace::memory_cells() const {
    std::size_t cells = 4 * static_cast<std::size_t>(k_);  // running sums + compensation
    for (const auto& s : snapshots_)
        cells += static_cast<std::size_t>(s.cum_borda.size() + s.cum_shifted.size() +
                                          s.round_borda.size()) +
                 2;
    return cells;
}

FinalizedTrace RegretTrace::finalize() const {
    if (t_ != horizon_)
        throw IncompleteTrace("trace holds " + std::to_string(t_) + " of " +
                              std::to_string(horizon_) + " rounds");

    FinalizedTrace out;
    out.k = k_;
    out.horizon = horizon_;

    const Eigen::VectorXd totals_b = cum_borda_.value();
    const Eigen::VectorXd totals_s = cum_shifted_.value();
    const int i_star = hindsight_best(totals_b);
    out.i_star = i_star;
    out.total_regret = totals_b(i_star) - pair_borda_.value();
    out.total_shifted_regret = totals_s(i_star) - pair_shifted_.value();

    out.rows.reserve(snapshots_.size());
    for (const auto& snap : snapshots_) {
        TraceRow row;
        row.t = snap.t;
        row.x = snap.x;
        row.y = snap.y;
        row.o = snap.o;
        row.r_t = snap.round_borda(i_star) -
                  0.5 * (snap.round_borda(snap.x) + snap.round_borda(snap.y));
        row.R_t = snap.cum_borda(i_star) - snap.cum_pair_borda;
        row.R_s_t = snap.cum_shifted(i_star) - snap.cum_pair_shifted;
        out.rows.push_back(row);
    }

    // Shifted-regret identity R_T = (K/(K-1)) R^s_T, cross-checked from the
    // independently accumulated shifted sums.
    const double ratio = static_cast<double>(k_) / static_cast<double>(k_ - 1);
    const double lhs = out.total_regret;
    const double rhs = ratio * out.total_shifted_regret;
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    if (std::abs(lhs - rhs) > 1e-9 * scale)
        throw Error("regret identity violated: R_T = " + std::to_string(lhs) +
                    " vs (K/(K-1)) R^s_T = " + std::to_string(rhs));
    if (lhs < -1e-9 * scale)
        throw Error("cumulative regret negative at hindsight winner: " + std::to_string(lhs));

    return out;
}

}  // namespace duelbench
