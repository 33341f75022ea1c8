#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "pkg/core.hpp"
#include "pkg/estimation.hpp"
#include "pkg/hash.hpp"
#include "pkg/partitioner.hpp"
#include "pkg/workload.hpp"

namespace pkg {

// Partial counts held on one worker between flushes.
using PartialCounterStore = std::unordered_map<KeyId, std::uint64_t>;

struct AggregationReport {
    std::uint64_t period = 0;         // 0 = never flush mid-stream
    std::uint64_t flush_records = 0;  // (key, partial count) records sent
    std::uint64_t peak_counters = 0;  // max simultaneous (worker, key) pairs
    std::unordered_map<KeyId, std::uint64_t> totals;
    std::vector<std::pair<KeyId, std::uint64_t>> final_topk;  // count desc, key asc
};

// Streaming top-k word count over the simulated DAG. Workers accumulate
// partial counts; every `period` messages all partials are flushed to a
// single aggregator and cleared; a final flush runs at stream end.
inline AggregationReport run_wordcount(const RunConfig& config,
                                       PartitionerKind kind,
                                       const Stream& stream,
                                       std::uint64_t period,
                                       std::uint32_t topk) {
    config.validate();
    if (kind != PartitionerKind::Kg && kind != PartitionerKind::Sg &&
        kind != PartitionerKind::Pkg)
        throw std::invalid_argument("wordcount supports kg, sg and pkg only");

    const std::uint32_t W = config.workers;
    const HashFamily family(config.master_seed, config.choices, W);
    LoadVector loads(W, 0);
    std::vector<RoundRobinCounter> rr(config.sources);
    std::vector<PartialCounterStore> stores(W);

    AggregationReport report;
    report.period = period;
    std::uint64_t live_counters = 0;

    auto flush = [&] {
        for (auto& store : stores) {
            for (const auto& [key, count] : store) {
                report.totals[key] += count;
                ++report.flush_records;
            }
            store.clear();
        }
        live_counters = 0;
    };

    const std::uint64_t m = stream.size();
    for (std::uint64_t t = 0; t < m; ++t) {
        const KeyId key = stream.keys[t];
        const std::uint32_t src =
            static_cast<std::uint32_t>(t % config.sources);
        WorkerId dest = 0;
        switch (kind) {
            case PartitionerKind::Kg: dest = kg_route(family, key); break;
            case PartitionerKind::Sg: dest = rr[src].next(W); break;
            default: dest = pkg_route(family, key, loads); break;
        }
        record_route(loads, dest);
        auto [it, inserted] = stores[dest].try_emplace(key, 0);
        ++it->second;
        if (inserted) ++live_counters;
        report.peak_counters = std::max(report.peak_counters, live_counters);
        if (period > 0 && (t + 1) % period == 0) flush();
    }
    flush();

    report.final_topk.assign(report.totals.begin(), report.totals.end());
    std::sort(report.final_topk.begin(), report.final_topk.end(),
              [](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return a.first < b.first;
              });
    if (report.final_topk.size() > topk) report.final_topk.resize(topk);
    return report;
}

struct MemoryComparisonRow {
    PartitionerKind kind;
    std::uint32_t workers;
    std::uint64_t peak_counters;
};

// Peak counter footprint per (policy, W) with no mid-stream flushing.
inline std::vector<MemoryComparisonRow> memory_comparison(
    const Stream& stream, const std::vector<std::uint32_t>& worker_counts,
    const std::vector<PartitionerKind>& policies, std::uint64_t master_seed) {
    std::vector<MemoryComparisonRow> rows;
    for (PartitionerKind kind : policies) {
        for (std::uint32_t w : worker_counts) {
            RunConfig config;
            config.workers = w;
            config.master_seed = master_seed;
            const AggregationReport r = run_wordcount(config, kind, stream, 0, 1);
            rows.push_back({kind, w, r.peak_counters});
        }
    }
    return rows;
}

}  // namespace pkg
