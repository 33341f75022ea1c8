#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "pkg/core.hpp"
#include "pkg/estimation.hpp"
#include "pkg/hash.hpp"
#include "pkg/partitioner.hpp"
#include "pkg/workload.hpp"

namespace pkg {

enum class SourceSplitMode { Shuffle, Keyed };

struct SimOptions {
    PartitionerKind partitioner = PartitionerKind::Pkg;
    EstimatorKind estimator = EstimatorKind::Global;
    std::uint64_t probe_period = 0;  // global messages; required for LocalProbing
    SourceSplitMode split = SourceSplitMode::Shuffle;
    bool keep_trace = false;
};

struct RunResult {
    ImbalanceSeries series;
    LoadVector final_loads;
    double avg_imbalance = 0.0;   // mean I(t) over the sample grid
    double normalized_avg = 0.0;  // avg_imbalance / m
    std::optional<RoutingTrace> trace;
    std::optional<std::vector<std::uint32_t>> source_of;  // with keep_trace

    // Filled for PKG with plain local estimation: per sample point, the sum
    // of per-source local imbalances, and whether the local vectors summed
    // to the true loads entrywise.
    std::vector<double> local_imbalance_sums;
    bool decomposition_exact = true;
};

namespace detail {
constexpr std::uint64_t kSplitSeedSalt = 0x1b873593cc9e2d51ULL;
}

// Drives the stream -> S sources -> W workers DAG for one policy and
// samples I(t) every sample_interval messages. Strictly single threaded
// and deterministic for a fixed (config, options, stream).
inline RunResult run(const RunConfig& config, const SimOptions& opt,
                     const Stream& stream) {
    config.validate();
    const std::uint32_t W = config.workers;
    const std::uint32_t S = config.sources;
    const std::uint64_t m = stream.size();

    const bool is_pkg = opt.partitioner == PartitionerKind::Pkg;
    if (!is_pkg && opt.estimator != EstimatorKind::Global)
        throw std::invalid_argument("estimator selection only applies to pkg");
    if (opt.estimator == EstimatorKind::LocalProbing && opt.probe_period < 1)
        throw std::invalid_argument("probing estimator needs probe_period >= 1");

    const HashFamily family(config.master_seed, config.choices, W);
    const std::uint64_t split_seed =
        mix64(config.master_seed ^ detail::kSplitSeedSalt);

    LoadVector true_loads(W, 0);
    RoutingTable table;  // shared by the static whole-key policies
    RoutingTable off_table;
    if (opt.partitioner == PartitionerKind::OffGreedy)
        off_table = off_greedy_assign(empirical_frequencies(stream), W);

    std::vector<RoundRobinCounter> rr(S);
    std::vector<LocalEstimator> locals;
    std::vector<ProbingEstimator> probers;
    if (is_pkg && opt.estimator == EstimatorKind::Local)
        for (std::uint32_t s = 0; s < S; ++s) locals.emplace_back(s, W);
    if (is_pkg && opt.estimator == EstimatorKind::LocalProbing) {
        for (std::uint32_t s = 0; s < S; ++s) {
            probers.emplace_back(s, W, opt.probe_period);
            // Stagger probe phases across sources. Synchronized probes make
            // every source correct the same load deficit at once, which
            // oscillates with growing amplitude instead of converging.
            probers.back().last_probe = s * opt.probe_period / S;
        }
    }

    RunResult result;
    if (opt.keep_trace) {
        result.trace.emplace();
        result.trace->destinations.reserve(m);
        result.source_of.emplace();
        result.source_of->reserve(m);
    }

    const bool track_decomposition = !locals.empty();
    double imbalance_sum = 0.0;
    std::uint64_t samples = 0;

    auto take_sample = [&](std::uint64_t processed) {
        const ImbalanceSample s = sample_imbalance(true_loads, processed);
        result.series.push_back(s);
        imbalance_sum += s.imbalance;
        ++samples;
        if (track_decomposition) {
            double local_sum = 0.0;
            LoadVector recomposed(W, 0);
            for (const auto& est : locals) {
                local_sum += imbalance(est.view());
                for (std::uint32_t w = 0; w < W; ++w)
                    recomposed[w] += est.view()[w];
            }
            result.local_imbalance_sums.push_back(local_sum);
            if (recomposed != true_loads) result.decomposition_exact = false;
        }
    };

    for (std::uint64_t t = 0; t < m; ++t) {
        const KeyId key = stream.keys[t];
        const std::uint32_t src =
            opt.split == SourceSplitMode::Shuffle
                ? static_cast<std::uint32_t>(t % S)
                : static_cast<std::uint32_t>(hash_key(split_seed,
                                                      stream.source_key(t)) % S);

        for (auto& prober : probers)
            if (prober.due(t)) prober.probe(true_loads, t);

        WorkerId dest = 0;
        switch (opt.partitioner) {
            case PartitionerKind::Kg:
                dest = kg_route(family, key);
                break;
            case PartitionerKind::Sg:
                dest = rr[src].next(W);
                break;
            case PartitionerKind::PotcStatic:
                dest = potc_static_route(family, key, table, true_loads);
                break;
            case PartitionerKind::OnGreedy:
                dest = on_greedy_route(key, table, true_loads);
                break;
            case PartitionerKind::OffGreedy:
                dest = off_table.at(key);
                break;
            case PartitionerKind::Pkg:
                switch (opt.estimator) {
                    case EstimatorKind::Global:
                        dest = pkg_route(family, key, true_loads);
                        break;
                    case EstimatorKind::Local:
                        dest = pkg_route(family, key, locals[src].view());
                        break;
                    case EstimatorKind::LocalProbing:
                        dest = pkg_route(family, key, probers[src].view());
                        break;
                }
                break;
        }

        record_route(true_loads, dest);
        if (!locals.empty()) locals[src].on_route(dest);
        if (!probers.empty()) probers[src].on_route(dest);
        if (opt.keep_trace) {
            result.trace->destinations.push_back(dest);
            result.source_of->push_back(src);
        }

        if ((t + 1) % config.sample_interval == 0 || t + 1 == m)
            take_sample(t + 1);
    }

    result.final_loads = std::move(true_loads);
    result.avg_imbalance = samples ? imbalance_sum / static_cast<double>(samples) : 0.0;
    result.normalized_avg = m ? result.avg_imbalance / static_cast<double>(m) : 0.0;
    return result;
}

// ---------------------------------------------------------------------------
// Scaling check for the greedy-d process: uniform keys over 5n values,
// m = n^2 balls into n bins, normalized statistic R(n) = I(m) / (m/n).

struct TheoryPoint {
    std::uint32_t n = 0;
    std::uint64_t seed = 0;
    double final_imbalance = 0.0;
    double r = 0.0;  // I(m) / (m/n)
};

struct TheoryReport {
    std::uint32_t d = 0;
    std::vector<TheoryPoint> points;          // ordered by (n, seed)
    std::map<std::uint32_t, double> medians;  // per-n median of R
};

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

inline unsigned sweep_threads() {
    if (const char* env = std::getenv("PKG_BALANCE_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

}  // namespace detail

inline TheoryPoint theory_point(std::uint32_t n, std::uint32_t d,
                                std::uint64_t seed) {
    if (n < 8) throw std::invalid_argument("theory_check: n must be >= 8");
    WorkloadSpec spec;
    spec.kind = WorkloadKind::Uniform;
    spec.keys = 5ULL * n;  // p1 = 1/(5n)
    spec.messages = static_cast<std::uint64_t>(n) * n;
    const Stream stream = generate(spec, seed);

    RunConfig config;
    config.workers = n;
    config.sources = 1;
    config.choices = d;
    config.master_seed = seed;
    config.sample_interval = spec.messages;  // only the final sample matters

    SimOptions opt;
    opt.partitioner = PartitionerKind::Pkg;
    opt.estimator = EstimatorKind::Global;
    const RunResult res = run(config, opt, stream);

    TheoryPoint p;
    p.n = n;
    p.seed = seed;
    p.final_imbalance = imbalance(res.final_loads);
    p.r = p.final_imbalance /
          (static_cast<double>(spec.messages) / static_cast<double>(n));
    return p;
}

// Runs the grid of (n, seed) points, fanning out across threads capped by
// PKG_BALANCE_THREADS. Output ordering is deterministic.
inline TheoryReport theory_check(const std::vector<std::uint32_t>& n_values,
                                 std::uint32_t d,
                                 const std::vector<std::uint64_t>& seeds) {
    TheoryReport report;
    report.d = d;
    report.points.resize(n_values.size() * seeds.size());

    const unsigned threads =
        std::min<unsigned>(detail::sweep_threads(),
                           static_cast<unsigned>(report.points.size()));
    std::vector<std::thread> pool;
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= report.points.size()) return;
            const std::uint32_t n = n_values[i / seeds.size()];
            const std::uint64_t seed = seeds[i % seeds.size()];
            report.points[i] = theory_point(n, d, seed);
        }
    };
    for (unsigned i = 0; i + 1 < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (std::uint32_t n : n_values) {
        std::vector<double> rs;
        for (const TheoryPoint& p : report.points)
            if (p.n == n) rs.push_back(p.r);
        report.medians[n] = detail::median(std::move(rs));
    }
    return report;
}

// Pairwise positional agreement between kept traces.
inline std::vector<std::vector<double>> compare(
    const std::vector<const RunResult*>& runs) {
    std::vector<std::vector<double>> matrix(runs.size(),
                                            std::vector<double>(runs.size(), 1.0));
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (!runs[i]->trace)
            throw std::invalid_argument("compare: run without a trace");
        for (std::size_t j = i + 1; j < runs.size(); ++j) {
            const double a = agreement_fraction(*runs[i]->trace, *runs[j]->trace);
            matrix[i][j] = matrix[j][i] = a;
        }
    }
    return matrix;
}

}  // namespace pkg
