#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "pkg/core.hpp"
#include "pkg/hash.hpp"

namespace pkg {

enum class PartitionerKind {
    Kg,          // hash-based key grouping (H in the evaluation)
    Sg,          // shuffle grouping, per-source round robin
    PotcStatic,  // power of two choices applied to key grouping
    OnGreedy,    // least loaded worker per new key, whole-key assignment
    OffGreedy,   // frequency-sorted offline greedy
    Pkg          // power of two choices + key splitting
};

// key -> pinned worker, used by the static whole-key policies.
using RoutingTable = std::unordered_map<KeyId, WorkerId>;

// key -> occurrence count over the whole stream.
using KeyFrequencyTable = std::unordered_map<KeyId, std::uint64_t>;

// Argmin over a candidate list; the earliest candidate wins ties, so with
// PoTC h_1's choice beats h_2's and lower worker ids beat higher ones.
inline WorkerId argmin_load(const LoadVector& loads,
                            const std::vector<WorkerId>& candidates) {
    WorkerId best = candidates.front();
    for (std::size_t i = 1; i < candidates.size(); ++i)
        if (loads[candidates[i]] < loads[best]) best = candidates[i];
    return best;
}

inline WorkerId argmin_load(const LoadVector& loads) {
    WorkerId best = 0;
    for (WorkerId w = 1; w < loads.size(); ++w)
        if (loads[w] < loads[best]) best = w;
    return best;
}

// P(k) = h_1(k): every occurrence of a key lands on the same worker.
inline WorkerId kg_route(const HashFamily& family, KeyId key) {
    return family.choice(0, key);
}

// Per-source round-robin counter for shuffle grouping.
struct RoundRobinCounter {
    std::uint64_t count = 0;

    WorkerId next(std::uint32_t workers) {
        return static_cast<WorkerId>(count++ % workers);
    }
};

// PoTC without key splitting: the first occurrence picks the less loaded of
// the two hash choices and the key is pinned there forever.
inline WorkerId potc_static_route(const HashFamily& family, KeyId key,
                                  RoutingTable& table,
                                  const LoadVector& global_loads) {
    auto it = table.find(key);
    if (it != table.end()) return it->second;
    const WorkerId w = argmin_load(global_loads, family.choices(key));
    table.emplace(key, w);
    return w;
}

// New keys go to the globally least loaded worker, then stay pinned.
inline WorkerId on_greedy_route(KeyId key, RoutingTable& table,
                                const LoadVector& global_loads) {
    auto it = table.find(key);
    if (it != table.end()) return it->second;
    const WorkerId w = argmin_load(global_loads);
    table.emplace(key, w);
    return w;
}

// Offline greedy (LPT): keys sorted by decreasing frequency, ties by
// ascending key id, each assigned to the worker with least assigned weight.
inline RoutingTable off_greedy_assign(const KeyFrequencyTable& freqs,
                                      std::uint32_t workers) {
    std::vector<std::pair<KeyId, std::uint64_t>> keys(freqs.begin(), freqs.end());
    std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    LoadVector weights(workers, 0);
    RoutingTable table;
    table.reserve(keys.size());
    for (const auto& [key, count] : keys) {
        const WorkerId w = argmin_load(weights);
        weights[w] += count;
        table.emplace(key, w);
    }
    return table;
}

// Greedy-d step: least loaded of the d hash choices under the given load
// view. No routing table; repeated keys may switch between their choices.
inline WorkerId pkg_route(const HashFamily& family, KeyId key,
                          const LoadVector& load_view) {
    return argmin_load(load_view, family.choices(key));
}

}  // namespace pkg
