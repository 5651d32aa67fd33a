#pragma once

#include <map>
#include <vector>

#include "decider/retrieval/corpus.hpp"
#include "decider/trace/replay.hpp"
#include "decider/trace/trace.hpp"

namespace decider::retrieval {

struct SweepRow {
    Bucket bucket = Bucket::easy;
    double tau = 0.0;
    double alpha = 0.0;
    double success = 0.0;     // fraction in [0,1]
    double avg_rounds = 0.0;
};

inline Bucket trace_bucket(const EpisodeTrace& trace) {
    auto it = trace.metrics.find("bucket");
    if (it == trace.metrics.end()) {
        throw incomplete_trace_error("episode " + trace.scenario_id + " lacks a bucket metric");
    }
    return static_cast<Bucket>(static_cast<int>(it->second));
}

// Pure replay over saved traces: no retrieval, no signal recomputation
// beyond the composite blend.
inline std::vector<SweepRow> sweep(const std::vector<EpisodeTrace>& traces,
                                   const std::vector<double>& tau_grid,
                                   const std::vector<double>& alpha_grid, int budget = 2) {
    if (traces.empty()) throw precondition_error("sweep: no traces");
    std::vector<SweepRow> rows;
    for (double alpha : alpha_grid) {
        for (double tau : tau_grid) {
            std::map<Bucket, std::pair<int, std::pair<int, int>>> agg;  // bucket -> (n, (succ, rounds))
            for (const auto& tr : traces) {
                ReplayResult rr = replay_threshold_controller(tr, tau, alpha, budget);
                auto& slot = agg[trace_bucket(tr)];
                slot.first += 1;
                slot.second.first += rr.success ? 1 : 0;
                slot.second.second += rr.rounds;
            }
            for (const auto& [bucket, slot] : agg) {
                SweepRow row;
                row.bucket = bucket;
                row.tau = tau;
                row.alpha = alpha;
                row.success = static_cast<double>(slot.second.first) / slot.first;
                row.avg_rounds = static_cast<double>(slot.second.second) / slot.first;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

inline const SweepRow& find_row(const std::vector<SweepRow>& rows, Bucket bucket, double tau,
                                double alpha) {
    for (const auto& r : rows) {
        if (r.bucket == bucket && std::abs(r.tau - tau) < 1e-9 && std::abs(r.alpha - alpha) < 1e-9) {
            return r;
        }
    }
    throw data_error("sweep row not found");
}

}  // namespace decider::retrieval
