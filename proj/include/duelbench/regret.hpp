#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "duelbench/preference.hpp"
#include "duelbench/summation.hpp"

namespace duelbench {

// One finalized checkpoint row.
struct TraceRow {
    std::int64_t t = 0;
    int x = 0;  // 0-based; exporters convert to 1-based
    int y = 0;
    int o = 0;
    double r_t = 0.0;    // per-round Borda regret at this checkpoint's round
    double R_t = 0.0;    // cumulative Borda regret through t
    double R_s_t = 0.0;  // cumulative shifted regret through t
};

struct FinalizedTrace {
    int k = 0;
    std::int64_t horizon = 0;
    int i_star = 0;  // hindsight winner, 0-based
    double total_regret = 0.0;
    double total_shifted_regret = 0.0;
    std::vector<TraceRow> rows;  // one per checkpoint, ascending t
};

// Ground-truth regret bookkeeping, owned by the simulator and invisible to
// policies. The hindsight winner i* is only known at the end, so the trace
// accumulates per-item score sums and pair terms online (compensated
// summation throughout) and resolves r_t / R_t at finalize from snapshots
// taken at checkpoint rounds. Memory is independent of T: O(K) running
// state plus O(K) per checkpoint.
class RegretTrace {
public:
    // checkpoints must be ascending, unique, within [1, T]; T >= 1.
    RegretTrace(int k, std::int64_t horizon, std::vector<std::int64_t> checkpoints);

    // Appends round t+1. b and s are that round's true score vectors; x, y
    // the played pair; o the observed feedback. Throws HorizonError past T.
    void record_round(const ScoreVector& b, const ScoreVector& s, int x, int y, int o);

    std::int64_t rounds_recorded() const { return t_; }
    std::int64_t horizon() const { return horizon_; }
    std::size_t checkpoint_count() const { return checkpoints_.size(); }

    // Storage cells held by this trace; must not grow with T.
    std::size_t memory_cells() const;

    // Resolves i*, materializes the checkpoint series, and checks the
    // R_T = (K/(K-1)) R^s_T identity. Throws IncompleteTrace before round T.
    FinalizedTrace finalize() const;

private:
    struct Snapshot {
        std::int64_t t;
        int x, y, o;
        Eigen::VectorXd cum_borda;    // per-item Borda sums through t
        Eigen::VectorXd cum_shifted;  // per-item shifted sums through t
        Eigen::VectorXd round_borda;  // b_t itself (r_t needs b_t(i*))
        double cum_pair_borda;        // sum of (b(x)+b(y))/2 through t
        double cum_pair_shifted;
    };

    int k_;
    std::int64_t horizon_;
    std::vector<std::int64_t> checkpoints_;
    std::size_t next_checkpoint_ = 0;
    std::int64_t t_ = 0;

    KahanVector cum_borda_;
    KahanVector cum_shifted_;
    KahanSum pair_borda_;
    KahanSum pair_shifted_;
    std::vector<Snapshot> snapshots_;
};

}  // namespace duelbench
