#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pkg/core.hpp"
#include "pkg/hash.hpp"
#include "pkg/partitioner.hpp"

namespace pkg {

struct IngestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class IngestMode { KeyPerLine, TokenizedText, EdgeListInverted };

enum class WorkloadKind { Uniform, Lognormal, Zipf, HeavyKey, Drift, File };

struct WorkloadSpec {
    WorkloadKind kind = WorkloadKind::Uniform;
    std::uint64_t keys = 1;       // K
    std::uint64_t messages = 1;   // m
    double mu = 0.0, sigma = 1.0; // lognormal
    double zipf_exponent = 1.0;
    double p1 = 0.5;              // heavykey head probability
    std::uint64_t drift_epoch = 1;
    std::shared_ptr<WorkloadSpec> inner;  // drift wraps another generator
    std::string path;             // file ingestion
    IngestMode mode = IngestMode::KeyPerLine;

    void validate() const {
        if (kind == WorkloadKind::File) {
            if (path.empty()) throw std::invalid_argument("workload: empty path");
            return;
        }
        if (kind == WorkloadKind::Drift) {
            if (drift_epoch < 1)
                throw std::invalid_argument("workload: drift epoch must be >= 1");
            if (!inner || inner->kind == WorkloadKind::Drift ||
                inner->kind == WorkloadKind::File)
                throw std::invalid_argument("workload: drift needs a generator spec");
            inner->validate();
            return;
        }
        if (keys < 1) throw std::invalid_argument("workload: K must be >= 1");
        if (messages < 1) throw std::invalid_argument("workload: m must be >= 1");
        if (kind == WorkloadKind::HeavyKey && (p1 <= 0.0 || p1 > 1.0))
            throw std::invalid_argument("workload: p1 must be in (0,1]");
        if (kind == WorkloadKind::Lognormal && sigma < 0.0)
            throw std::invalid_argument("workload: sigma must be >= 0");
    }
};

// A finite, fully materialized key stream. Keys are dense ids; for file
// input `names` maps ids back to the original tokens, and edge-list input
// carries a second per-message key used to spread messages over sources.
struct Stream {
    std::vector<KeyId> keys;            // worker-routing key per message
    std::vector<KeyId> source_keys;     // empty unless edge-list input
    std::vector<std::string> names;     // empty for synthetic streams

    std::uint64_t size() const { return keys.size(); }

    KeyId source_key(std::uint64_t i) const {
        return source_keys.empty() ? keys[i] : source_keys[i];
    }
};

namespace detail {

// Deterministic standard normal via Box-Muller; one value per call,
// second value discarded to keep the draw sequence trivially stable.
inline double next_normal(SplitMix64& rng) {
    double u1 = rng.next_double();
    while (u1 <= 0.0) u1 = rng.next_double();
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
}

inline std::vector<double> key_probabilities(const WorkloadSpec& spec,
                                             std::uint64_t seed) {
    const std::uint64_t k = spec.keys;
    std::vector<double> weights(k);
    switch (spec.kind) {
        case WorkloadKind::Uniform:
            for (auto& w : weights) w = 1.0;
            break;
        case WorkloadKind::Zipf:
            for (std::uint64_t i = 0; i < k; ++i)
                weights[i] = std::pow(static_cast<double>(i + 1), -spec.zipf_exponent);
            break;
        case WorkloadKind::Lognormal: {
            // K i.i.d. log-normal weights, normalized; the table is fixed
            // per seed so every run sees one realized key distribution.
            SplitMix64 rng(mix64(seed ^ 0x9d1f07a553b1c0d9ULL));
            for (auto& w : weights)
                w = std::exp(spec.mu + spec.sigma * next_normal(rng));
            break;
        }
        case WorkloadKind::HeavyKey: {
            weights[0] = spec.p1;
            const double rest = k > 1 ? (1.0 - spec.p1) / static_cast<double>(k - 1)
                                      : 0.0;
            for (std::uint64_t i = 1; i < k; ++i) weights[i] = rest;
            break;
        }
        default:
            throw std::invalid_argument("key_probabilities: not a table workload");
    }
    double sum = 0.0;
    for (double w : weights) sum += w;
    for (auto& w : weights) w /= sum;
    return weights;
}

}  // namespace detail

// Deterministic synthetic key stream: m inverse-CDF samples from the
// spec's key distribution. Drift rotates the rank->key mapping by a fresh
// seeded shift every epoch, preserving the marginal shape.
inline Stream generate(const WorkloadSpec& spec, std::uint64_t seed) {
    spec.validate();
    if (spec.kind == WorkloadKind::File)
        throw std::invalid_argument("generate: file specs use ingest()");

    const WorkloadSpec& table_spec =
        spec.kind == WorkloadKind::Drift ? *spec.inner : spec;
    const std::vector<double> probs = detail::key_probabilities(table_spec, seed);
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;

    const std::uint64_t k = table_spec.keys;
    const std::uint64_t m = table_spec.messages;
    SplitMix64 sample_rng(mix64(seed ^ 0x6c62272e07bb0142ULL));
    SplitMix64 drift_rng(mix64(seed ^ 0x27d4eb2f165667c5ULL));

    Stream out;
    out.keys.reserve(m);
    std::uint64_t shift = 0;
    for (std::uint64_t t = 0; t < m; ++t) {
        if (spec.kind == WorkloadKind::Drift && t > 0 && t % spec.drift_epoch == 0)
            shift = drift_rng.next() % k;
        const double u = sample_rng.next_double();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::uint64_t key = static_cast<std::uint64_t>(it - cdf.begin());
        if (key >= k) key = k - 1;
        out.keys.push_back((key + shift) % k);
    }
    return out;
}

// Interns raw tokens to dense key ids; id is stable per token within a run.
class KeyInterner {
public:
    KeyId intern(const std::string& token) {
        auto [it, inserted] = ids_.try_emplace(token, names_.size());
        if (inserted) names_.push_back(token);
        return it->second;
    }

    const std::vector<std::string>& names() const { return names_; }

private:
    std::unordered_map<std::string, KeyId> ids_;
    std::vector<std::string> names_;
};

inline Stream ingest(const std::string& path, IngestMode mode) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open input file: " + path);

    Stream out;
    KeyInterner interner;
    std::string line;
    std::uint64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        switch (mode) {
            case IngestMode::KeyPerLine:
                out.keys.push_back(interner.intern(line));
                break;
            case IngestMode::TokenizedText: {
                std::istringstream ss(line);
                std::string token;
                while (ss >> token) out.keys.push_back(interner.intern(token));
                break;
            }
            case IngestMode::EdgeListInverted: {
                if (line.empty() || line[0] == '#') break;
                std::istringstream ss(line);
                std::string src, dst, extra;
                if (!(ss >> src >> dst) || (ss >> extra))
                    throw IngestError(path + ":" + std::to_string(lineno) +
                                      ": malformed edge line");
                // The edge is inverted: the destination vertex keys the
                // worker, the source vertex keys the source split.
                out.source_keys.push_back(interner.intern(src));
                out.keys.push_back(interner.intern(dst));
                break;
            }
        }
    }
    out.names = interner.names();
    return out;
}

inline KeyFrequencyTable empirical_frequencies(const Stream& stream) {
    KeyFrequencyTable freqs;
    for (KeyId key : stream.keys) ++freqs[key];
    return freqs;
}

// Parses the CLI workload mini-grammar:
//   lognormal:MU,SIGMA,K,M | zipf:S,K,M | uniform:K,M | heavykey:P1,K,M
//   | drift:EPOCH:(inner spec)
inline WorkloadSpec parse_workload_spec(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("workload spec: missing ':' in '" + text + "'");
    const std::string head = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);

    auto split_fields = [&](const std::string& s, std::size_t expected) {
        std::vector<std::string> fields;
        std::istringstream ss(s);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != expected)
            throw std::invalid_argument("workload spec '" + text + "': expected " +
                                        std::to_string(expected) + " fields");
        return fields;
    };
    auto to_u64 = [&](const std::string& s) {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("workload spec: bad integer '" + s + "'");
        return v;
    };
    auto to_dbl = [&](const std::string& s) {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument("workload spec: bad number '" + s + "'");
        return v;
    };

    WorkloadSpec spec;
    if (head == "uniform") {
        auto f = split_fields(rest, 2);
        spec.kind = WorkloadKind::Uniform;
        spec.keys = to_u64(f[0]);
        spec.messages = to_u64(f[1]);
    } else if (head == "lognormal") {
        auto f = split_fields(rest, 4);
        spec.kind = WorkloadKind::Lognormal;
        spec.mu = to_dbl(f[0]);
        spec.sigma = to_dbl(f[1]);
        spec.keys = to_u64(f[2]);
        spec.messages = to_u64(f[3]);
    } else if (head == "zipf") {
        auto f = split_fields(rest, 3);
        spec.kind = WorkloadKind::Zipf;
        spec.zipf_exponent = to_dbl(f[0]);
        spec.keys = to_u64(f[1]);
        spec.messages = to_u64(f[2]);
    } else if (head == "heavykey") {
        auto f = split_fields(rest, 3);
        spec.kind = WorkloadKind::HeavyKey;
        spec.p1 = to_dbl(f[0]);
        spec.keys = to_u64(f[1]);
        spec.messages = to_u64(f[2]);
    } else if (head == "drift") {
        const auto second = rest.find(':');
        if (second == std::string::npos)
            throw std::invalid_argument("workload spec: drift needs an inner spec");
        std::string epoch = rest.substr(0, second);
        std::string inner = rest.substr(second + 1);
        if (inner.size() >= 2 && inner.front() == '(' && inner.back() == ')')
            inner = inner.substr(1, inner.size() - 2);
        spec.kind = WorkloadKind::Drift;
        spec.drift_epoch = to_u64(epoch);
        spec.inner = std::make_shared<WorkloadSpec>(parse_workload_spec(inner));
    } else {
        throw std::invalid_argument("workload spec: unknown kind '" + head + "'");
    }
    spec.validate();
    return spec;
}

}  // namespace pkg
