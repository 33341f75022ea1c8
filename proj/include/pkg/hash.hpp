#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pkg/core.hpp"

namespace pkg {

// 64-bit finalizer from splitmix64 (Vigna / Stafford mix13).
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seeded keyed hash: avalanche the key, fold in the seed, avalanche again.
constexpr std::uint64_t hash_key(std::uint64_t seed, std::uint64_t key) {
    return mix64(mix64(key) ^ seed);
}

// splitmix64 stream generator; also the simulator's uniform RNG.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

// Counter-mixed seed stream from master_seed. If a draw collides with an
// earlier seed the counter advances and the draw is repeated.
inline std::vector<std::uint64_t> derive_seeds(std::uint64_t master_seed,
                                               std::uint32_t d) {
    if (d < 1) throw std::invalid_argument("derive_seeds: d must be >= 1");
    std::vector<std::uint64_t> seeds;
    seeds.reserve(d);
    SplitMix64 rng(master_seed);
    while (seeds.size() < d) {
        const std::uint64_t candidate = rng.next();
        bool clash = false;
        for (std::uint64_t s : seeds)
            if (s == candidate) { clash = true; break; }
        if (!clash) seeds.push_back(candidate);
    }
    return seeds;
}

// Family of d seeded hash functions h_1..h_d mapping key ids to workers.
// The two (or d) candidates for a key may coincide; no resampling.
class HashFamily {
public:
    HashFamily(std::uint64_t master_seed, std::uint32_t d, std::uint32_t workers)
        : seeds_(derive_seeds(master_seed, d)), workers_(workers) {
        if (workers < 1)
            throw std::invalid_argument("HashFamily: workers must be >= 1");
    }

    std::uint32_t d() const { return static_cast<std::uint32_t>(seeds_.size()); }
    std::uint32_t workers() const { return workers_; }
    const std::vector<std::uint64_t>& seeds() const { return seeds_; }

    WorkerId choice(std::uint32_t i, KeyId key) const {
        return static_cast<WorkerId>(hash_key(seeds_[i], key) % workers_);
    }

    std::vector<WorkerId> choices(KeyId key) const {
        std::vector<WorkerId> out(seeds_.size());
        for (std::size_t i = 0; i < seeds_.size(); ++i)
            out[i] = static_cast<WorkerId>(hash_key(seeds_[i], key) % workers_);
        return out;
    }

private:
    std::vector<std::uint64_t> seeds_;
    std::uint32_t workers_;
};

}  // namespace pkg
