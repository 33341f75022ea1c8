#pragma once

#include <cstdint>
#include <stdexcept>

#include "pkg/core.hpp"

namespace pkg {

enum class EstimatorKind { Global, Local, LocalProbing };

// True loads L_i(t), updated once per routed message from any source.
struct GlobalOracle {
    LoadVector loads;

    explicit GlobalOracle(std::uint32_t workers) : loads(workers, 0) {}

    void on_route(WorkerId worker) { record_route(loads, worker); }
    const LoadVector& view() const { return loads; }
};

// Per-source load estimate L_i^j: counts only what this source routed.
struct LocalEstimator {
    std::uint32_t source_id;
    LoadVector local_loads;

    LocalEstimator(std::uint32_t source, std::uint32_t workers)
        : source_id(source), local_loads(workers, 0) {}

    void on_route(WorkerId worker) { record_route(local_loads, worker); }
    const LoadVector& view() const { return local_loads; }
};

// Local estimator whose vector is overwritten with the true loads every
// probe_period messages (counted on the global message index).
struct ProbingEstimator {
    LocalEstimator base;
    std::uint64_t probe_period;     // in global messages
    std::uint64_t last_probe = 0;

    ProbingEstimator(std::uint32_t source, std::uint32_t workers,
                     std::uint64_t period)
        : base(source, workers), probe_period(period) {
        if (period < 1)
            throw std::invalid_argument("ProbingEstimator: period must be >= 1");
    }

    void on_route(WorkerId worker) { base.on_route(worker); }
    const LoadVector& view() const { return base.view(); }

    bool due(std::uint64_t now) const { return now >= last_probe + probe_period; }

    void probe(const LoadVector& true_loads, std::uint64_t now) {
        if (!due(now)) return;  // simulator guards the schedule
        base.local_loads = true_loads;
        last_probe = now;
    }
};

}  // namespace pkg
