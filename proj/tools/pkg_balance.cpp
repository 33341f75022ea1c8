// Command-line front end: single simulation runs, greedy-d scaling checks,
// and word-count accounting experiments, all emitting CSV.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pkg/csv.hpp"
#include "pkg/simulator.hpp"
#include "pkg/wordcount.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

pkg::PartitionerKind parse_partitioner(const std::string& name) {
    if (name == "kg") return pkg::PartitionerKind::Kg;
    if (name == "sg") return pkg::PartitionerKind::Sg;
    if (name == "potc") return pkg::PartitionerKind::PotcStatic;
    if (name == "ongreedy") return pkg::PartitionerKind::OnGreedy;
    if (name == "offgreedy") return pkg::PartitionerKind::OffGreedy;
    if (name == "pkg") return pkg::PartitionerKind::Pkg;
    throw UsageError("unknown partitioner: " + name);
}

pkg::IngestMode parse_mode(const std::string& name) {
    if (name == "lines") return pkg::IngestMode::KeyPerLine;
    if (name == "text") return pkg::IngestMode::TokenizedText;
    if (name == "edges") return pkg::IngestMode::EdgeListInverted;
    throw UsageError("unknown ingest mode: " + name);
}

struct InputFlags {
    std::string gen;
    std::string input;
    std::string mode = "lines";
    std::uint64_t messages = 0;  // optional cap
};

pkg::Stream load_stream(const InputFlags& flags, std::uint64_t seed) {
    if (flags.gen.empty() == flags.input.empty())
        throw UsageError("exactly one of --gen and --input is required");
    pkg::Stream stream;
    if (!flags.gen.empty()) {
        pkg::WorkloadSpec spec = pkg::parse_workload_spec(flags.gen);
        stream = pkg::generate(spec, seed);
    } else {
        stream = pkg::ingest(flags.input, parse_mode(flags.mode));
    }
    if (flags.messages > 0 && stream.size() > flags.messages) {
        stream.keys.resize(flags.messages);
        if (!stream.source_keys.empty()) stream.source_keys.resize(flags.messages);
    }
    return stream;
}

// Opens --output if given, else stdout.
class OutputSink {
public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw pkg::IngestError("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::vector<std::uint64_t> parse_u64_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::istringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(std::stoull(field));
    if (out.empty()) throw UsageError("empty list: " + text);
    return out;
}

int cmd_simulate(const pkg::RunConfig& config, const std::string& partitioner,
                 const InputFlags& input, const std::string& estimation,
                 std::uint64_t probe_period, const std::string& split,
                 const std::string& output, const std::string& trace_path,
                 bool explicit_estimation) {
    pkg::SimOptions opt;
    opt.partitioner = parse_partitioner(partitioner);
    if (opt.partitioner != pkg::PartitionerKind::Pkg &&
        (explicit_estimation || probe_period > 0))
        throw UsageError("--estimation/--probe-period only apply to --partitioner pkg");
    if (probe_period > 0) {
        opt.estimator = pkg::EstimatorKind::LocalProbing;
        opt.probe_period = probe_period;
    } else if (estimation == "local") {
        opt.estimator = pkg::EstimatorKind::Local;
    } else if (estimation == "global") {
        opt.estimator = pkg::EstimatorKind::Global;
    } else {
        throw UsageError("unknown estimation: " + estimation);
    }
    if (split == "shuffle") opt.split = pkg::SourceSplitMode::Shuffle;
    else if (split == "keyed") opt.split = pkg::SourceSplitMode::Keyed;
    else throw UsageError("unknown split: " + split);
    if (!trace_path.empty()) opt.keep_trace = true;

    pkg::RunConfig cfg = config;
    const pkg::Stream stream = load_stream(input, cfg.master_seed);
    if (cfg.sample_interval == 0)
        cfg.sample_interval = std::max<std::uint64_t>(1, stream.size() / 1000);

    const pkg::RunResult result = pkg::run(cfg, opt, stream);

    OutputSink sink(output);
    pkg::write_run_csv_header(sink.stream());
    pkg::write_run_csv_rows(sink.stream(), "0", cfg, opt, result, stream.size());

    if (!trace_path.empty()) {
        std::ofstream tf(trace_path);
        if (!tf) throw pkg::IngestError("cannot open trace file: " + trace_path);
        for (pkg::WorkerId w : result.trace->destinations) tf << w << '\n';
    }
    return 0;
}

int cmd_theory_check(std::uint32_t d, const std::string& n_list,
                     const std::string& seed_list, double heavykey_p1,
                     std::uint64_t heavykey_keys, std::uint32_t heavykey_n,
                     std::uint64_t heavykey_m, const std::string& output) {
    OutputSink sink(output);
    if (heavykey_p1 > 0.0) {
        // Heavy-key mode: report I(m)/m and flag the linear-growth regime.
        pkg::WorkloadSpec spec;
        spec.kind = pkg::WorkloadKind::HeavyKey;
        spec.p1 = heavykey_p1;
        spec.keys = heavykey_keys;
        spec.messages = heavykey_m;
        std::ostream& out = sink.stream();
        out << "kind,d,n,seed,imbalance_fraction,linear_growth\n";
        for (std::uint64_t seed : parse_u64_list(seed_list)) {
            const pkg::Stream stream = pkg::generate(spec, seed);
            pkg::RunConfig config;
            config.workers = heavykey_n;
            config.choices = d;
            config.master_seed = seed;
            config.sample_interval = spec.messages;
            pkg::SimOptions opt;
            opt.partitioner = pkg::PartitionerKind::Pkg;
            const pkg::RunResult res = pkg::run(config, opt, stream);
            const double frac =
                pkg::imbalance(res.final_loads) / static_cast<double>(spec.messages);
            const bool linear = heavykey_p1 > 2.0 / heavykey_n;
            out << "heavykey," << d << ',' << heavykey_n << ',' << seed << ','
                << pkg::format_double(frac) << ',' << (linear ? 1 : 0) << '\n';
        }
        return 0;
    }
    std::vector<std::uint32_t> ns;
    for (std::uint64_t n : parse_u64_list(n_list)) {
        if (n < 8) throw UsageError("theory-check: every n must be >= 8");
        ns.push_back(static_cast<std::uint32_t>(n));
    }
    const pkg::TheoryReport report =
        pkg::theory_check(ns, d, parse_u64_list(seed_list));
    pkg::write_theory_csv(sink.stream(), report);
    return 0;
}

int cmd_wordcount(const std::string& policy, std::uint32_t workers,
                  std::uint64_t period, std::uint32_t topk,
                  const InputFlags& input, std::uint64_t seed,
                  const std::string& output) {
    const pkg::PartitionerKind kind = parse_partitioner(policy);
    pkg::RunConfig config;
    config.workers = workers;
    config.master_seed = seed;
    const pkg::Stream stream = load_stream(input, seed);
    const pkg::AggregationReport report =
        pkg::run_wordcount(config, kind, stream, period, topk);
    OutputSink sink(output);
    pkg::write_wordcount_csv(sink.stream(), kind, config, report, stream);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Partial key grouping stream-partitioning simulator"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run one partitioner over a stream");
    pkg::RunConfig config;
    config.sample_interval = 0;  // 0 = auto (m/1000)
    std::string partitioner = "pkg", estimation = "global", split = "shuffle";
    std::string output, trace_path;
    std::uint64_t probe_period = 0;
    InputFlags sim_input;
    sim->add_option("--workers,-w", config.workers, "Number of workers W");
    sim->add_option("--sources,-s", config.sources, "Number of sources S");
    sim->add_option("--choices,-d", config.choices, "Hash choices d (default 2)");
    sim->add_option("--partitioner,-p", partitioner,
                    "kg|sg|potc|ongreedy|offgreedy|pkg");
    auto* est_opt = sim->add_option("--estimation", estimation,
                                    "global|local (pkg only)");
    sim->add_option("--probe-period", probe_period,
                    "Probe period in messages (pkg only; implies local)");
    sim->add_option("--gen", sim_input.gen,
                    "Workload spec, e.g. lognormal:1.789,2.366,16384,1000000");
    sim->add_option("--input", sim_input.input, "Input file path");
    sim->add_option("--mode", sim_input.mode, "lines|text|edges");
    sim->add_option("--messages,-m", sim_input.messages,
                    "Cap the number of messages processed");
    sim->add_option("--split", split, "shuffle|keyed source split");
    sim->add_option("--seed", config.master_seed, "Master seed");
    sim->add_option("--sample-interval", config.sample_interval,
                    "Messages between imbalance samples (0 = m/1000)");
    sim->add_option("--output,-o", output, "CSV output path (default stdout)");
    sim->add_option("--trace", trace_path, "Dump routing trace to this path");

    // theory-check
    auto* theory = app.add_subcommand(
        "theory-check", "Greedy-d scaling sweep (uniform over 5n keys, m=n^2)");
    std::uint32_t theory_d = 2;
    std::string n_list = "16,32,64,128", seed_list = "1,2,3,4,5";
    std::string theory_output;
    double hk_p1 = 0.0;
    std::uint64_t hk_keys = 10, hk_m = 100000;
    std::uint32_t hk_n = 10;
    theory->add_option("--d", theory_d, "Number of hash choices");
    theory->add_option("--n-list", n_list, "Comma-separated worker counts");
    theory->add_option("--seeds", seed_list, "Comma-separated seeds");
    theory->add_option("--heavykey-p1", hk_p1,
                       "Heavy-key mode: head probability (enables the mode)");
    theory->add_option("--heavykey-keys", hk_keys, "Heavy-key mode: K");
    theory->add_option("--heavykey-n", hk_n, "Heavy-key mode: workers");
    theory->add_option("--heavykey-messages", hk_m, "Heavy-key mode: m");
    theory->add_option("--output,-o", theory_output, "CSV output path");

    // wordcount
    auto* wc = app.add_subcommand("wordcount",
                                  "Streaming top-k word count accounting");
    std::string wc_policy = "pkg", wc_output;
    std::uint32_t wc_workers = 4, wc_topk = 10;
    std::uint64_t wc_period = 0, wc_seed = 0;
    InputFlags wc_input;
    wc->add_option("--policy", wc_policy, "kg|sg|pkg");
    wc->add_option("--workers,-w", wc_workers, "Number of workers W");
    wc->add_option("--period", wc_period, "Flush period in messages (0 = never)");
    wc->add_option("--topk", wc_topk, "Top-k size");
    wc->add_option("--gen", wc_input.gen, "Workload spec");
    wc->add_option("--input", wc_input.input, "Input file path");
    wc->add_option("--mode", wc_input.mode, "lines|text|edges");
    wc->add_option("--seed", wc_seed, "Master seed");
    wc->add_option("--output,-o", wc_output, "CSV output path");

    try {
        app.parse(argc, argv);
        if (sim->parsed())
            return cmd_simulate(config, partitioner, sim_input, estimation, probe_period,
                                split, output, trace_path, est_opt->count() > 0);
        if (theory->parsed())
            return cmd_theory_check(theory_d, n_list, seed_list, hk_p1, hk_keys,
                                    hk_n, hk_m, theory_output);
        if (wc->parsed())
            return cmd_wordcount(wc_policy, wc_workers, wc_period, wc_topk,
                                 wc_input, wc_seed, wc_output);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const pkg::IngestError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return 0;
}
