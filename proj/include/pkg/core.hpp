#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace pkg {

using KeyId = std::uint64_t;
using WorkerId = std::uint32_t;

// One unit-cost key occurrence. Timestamp is the message sequence index;
// there is no wall clock anywhere in the simulator.
struct Message {
    std::uint64_t timestamp = 0;
    KeyId key = 0;
};

// Per-worker message counts L_i(t). Index = worker id.
using LoadVector = std::vector<std::uint64_t>;

struct ImbalanceSample {
    std::uint64_t timestamp = 0;   // messages processed so far
    double imbalance = 0.0;        // max_load - avg_load
    std::uint64_t max_load = 0;
    double avg_load = 0.0;
};

using ImbalanceSeries = std::vector<ImbalanceSample>;

// Worker destination per message, in message order.
struct RoutingTrace {
    std::vector<WorkerId> destinations;
};

struct RunConfig {
    std::uint32_t workers = 1;
    std::uint32_t sources = 1;
    std::uint32_t choices = 2;           // d in the greedy-d process
    std::uint64_t master_seed = 0;
    std::uint64_t sample_interval = 1;   // messages between imbalance samples

    void validate() const {
        if (workers < 1) throw std::invalid_argument("workers must be >= 1");
        if (sources < 1) throw std::invalid_argument("sources must be >= 1");
        if (choices < 1) throw std::invalid_argument("choices must be >= 1");
        if (sample_interval < 1)
            throw std::invalid_argument("sample_interval must be >= 1");
    }
};

inline std::uint64_t total_load(const LoadVector& loads) {
    return std::accumulate(loads.begin(), loads.end(), std::uint64_t{0});
}

// I(t) = max_i L_i(t) - avg_i L_i(t). Loads are 64-bit exact; the only
// rounding is the final division by W.
inline double imbalance(const LoadVector& loads) {
    if (loads.empty())
        throw std::invalid_argument("imbalance: empty load vector");
    const std::uint64_t max = *std::max_element(loads.begin(), loads.end());
    const double avg =
        static_cast<double>(total_load(loads)) / static_cast<double>(loads.size());
    return static_cast<double>(max) - avg;
}

inline ImbalanceSample sample_imbalance(const LoadVector& loads,
                                        std::uint64_t timestamp) {
    if (loads.empty())
        throw std::invalid_argument("sample_imbalance: empty load vector");
    ImbalanceSample s;
    s.timestamp = timestamp;
    s.max_load = *std::max_element(loads.begin(), loads.end());
    s.avg_load =
        static_cast<double>(total_load(loads)) / static_cast<double>(loads.size());
    s.imbalance = static_cast<double>(s.max_load) - s.avg_load;
    return s;
}

inline void record_route(LoadVector& loads, WorkerId worker) {
    if (worker >= loads.size())
        throw std::invalid_argument("record_route: worker out of range");
    ++loads[worker];
}

// Fraction of positions where two traces routed to the same worker.
// This is positional agreement, not a set-based Jaccard index.
inline double agreement_fraction(const RoutingTrace& a, const RoutingTrace& b) {
    if (a.destinations.size() != b.destinations.size())
        throw std::invalid_argument("agreement_fraction: trace length mismatch");
    if (a.destinations.empty()) return 1.0;
    std::size_t same = 0;
    for (std::size_t i = 0; i < a.destinations.size(); ++i)
        if (a.destinations[i] == b.destinations[i]) ++same;
    return static_cast<double>(same) / static_cast<double>(a.destinations.size());
}

}  // namespace pkg
