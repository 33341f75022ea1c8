#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>

#include "pkg/simulator.hpp"
#include "pkg/wordcount.hpp"

namespace pkg {

inline const char* partitioner_name(PartitionerKind kind) {
    switch (kind) {
        case PartitionerKind::Kg: return "kg";
        case PartitionerKind::Sg: return "sg";
        case PartitionerKind::PotcStatic: return "potc";
        case PartitionerKind::OnGreedy: return "ongreedy";
        case PartitionerKind::OffGreedy: return "offgreedy";
        case PartitionerKind::Pkg: return "pkg";
    }
    return "?";
}

inline const char* estimator_name(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::Global: return "global";
        case EstimatorKind::Local: return "local";
        case EstimatorKind::LocalProbing: return "local+probe";
    }
    return "?";
}

// Floats carry 9 significant digits everywhere in the CSV surface.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline void write_run_csv_header(std::ostream& out) {
    out << "run_id,technique,estimator,W,S,d,seed,t,imbalance,"
           "imbalance_fraction,max_load,avg_load\n";
}

inline void write_run_csv_rows(std::ostream& out, const std::string& run_id,
                               const RunConfig& config, const SimOptions& opt,
                               const RunResult& result, std::uint64_t messages) {
    const std::string technique = partitioner_name(opt.partitioner);
    const std::string estimator =
        opt.partitioner == PartitionerKind::Pkg ? estimator_name(opt.estimator)
                                                : "none";
    for (const ImbalanceSample& s : result.series) {
        out << run_id << ',' << technique << ',' << estimator << ','
            << config.workers << ',' << config.sources << ',' << config.choices
            << ',' << config.master_seed << ',' << s.timestamp << ','
            << format_double(s.imbalance) << ','
            << format_double(messages ? s.imbalance / static_cast<double>(messages)
                                      : 0.0)
            << ',' << s.max_load << ',' << format_double(s.avg_load) << '\n';
    }
}

inline void write_theory_csv(std::ostream& out, const TheoryReport& report) {
    out << "kind,d,n,seed,final_imbalance,r\n";
    for (const TheoryPoint& p : report.points)
        out << "point," << report.d << ',' << p.n << ',' << p.seed << ','
            << format_double(p.final_imbalance) << ',' << format_double(p.r)
            << '\n';
    for (const auto& [n, med] : report.medians)
        out << "median," << report.d << ',' << n << ",," << ','
            << format_double(med) << '\n';
}

inline void write_wordcount_csv(std::ostream& out, PartitionerKind kind,
                                const RunConfig& config,
                                const AggregationReport& report,
                                const Stream& stream) {
    out << "row,policy,W,period,peak_counters,flush_records,key,count\n";
    out << "summary," << partitioner_name(kind) << ',' << config.workers << ','
        << report.period << ',' << report.peak_counters << ','
        << report.flush_records << ",,\n";
    for (const auto& [key, count] : report.final_topk) {
        out << "topk," << partitioner_name(kind) << ',' << config.workers << ','
            << report.period << ",,,";
        if (key < stream.names.size())
            out << stream.names[key];
        else
            out << key;
        out << ',' << count << '\n';
    }
}

}  // namespace pkg
