#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "pkg/partitioner.hpp"

using namespace pkg;

TEST_CASE("kg routes every key to h1 forever") {
    HashFamily family(3, 2, 8);
    for (KeyId k = 0; k < 100; ++k) {
        CHECK(kg_route(family, k) == family.choice(0, k));
        CHECK(kg_route(family, k) == kg_route(family, k));
    }
    HashFamily single(3, 2, 1);
    CHECK(kg_route(single, 42) == 0);
}

TEST_CASE("round robin cycles") {
    RoundRobinCounter rr;
    std::vector<WorkerId> seen;
    for (int i = 0; i < 7; ++i) seen.push_back(rr.next(3));
    CHECK(seen == std::vector<WorkerId>{0, 1, 2, 0, 1, 2, 0});
}

TEST_CASE("round robin loads differ by at most one") {
    RoundRobinCounter rr;
    LoadVector loads(4, 0);
    for (int i = 0; i < 1001; ++i) record_route(loads, rr.next(4));
    const auto [lo, hi] = std::minmax_element(loads.begin(), loads.end());
    CHECK(*hi - *lo <= 1);
}

TEST_CASE("interleaved sources keep global loads within S") {
    // Exhaustive over small interleavings: S=2 sources, W=2, every
    // source-assignment pattern of length 10.
    const int m = 10;
    for (unsigned pattern = 0; pattern < (1u << m); ++pattern) {
        RoundRobinCounter rr[2];
        LoadVector loads(2, 0);
        for (int i = 0; i < m; ++i) {
            const int src = (pattern >> i) & 1;
            record_route(loads, rr[src].next(2));
        }
        const auto [lo, hi] = std::minmax_element(loads.begin(), loads.end());
        CHECK(*hi - *lo <= 2);  // at most S
    }
}

TEST_CASE("potc static pins the first argmin choice") {
    HashFamily family(1, 2, 8);
    RoutingTable table;
    // Find a key whose two choices differ.
    KeyId key = 0;
    while (family.choice(0, key) == family.choice(1, key)) ++key;
    const WorkerId c1 = family.choice(0, key);
    const WorkerId c2 = family.choice(1, key);

    LoadVector loads(8, 0);
    loads[c1] = 3;
    loads[c2] = 1;
    CHECK(potc_static_route(family, key, table, loads) == c2);
    // Loads flip, but the table pin holds.
    loads[c1] = 0;
    loads[c2] = 10;
    CHECK(potc_static_route(family, key, table, loads) == c2);
}

TEST_CASE("potc static ties go to h1's choice") {
    HashFamily family(1, 2, 8);
    RoutingTable table;
    KeyId key = 0;
    while (family.choice(0, key) == family.choice(1, key)) ++key;
    LoadVector loads(8, 5);
    CHECK(potc_static_route(family, key, table, loads) == family.choice(0, key));
}

TEST_CASE("on greedy picks the least loaded worker for new keys") {
    RoutingTable table;
    LoadVector zero(3, 0);
    CHECK(on_greedy_route(100, table, zero) == 0);

    LoadVector loads{4, 1, 9};
    CHECK(on_greedy_route(200, table, loads) == 1);
    // Repeated key ignores loads.
    loads = {0, 50, 0};
    CHECK(on_greedy_route(200, table, loads) == 1);
}

TEST_CASE("off greedy hand trace") {
    KeyFrequencyTable freqs{{0, 5}, {1, 3}, {2, 2}};
    const RoutingTable table = off_greedy_assign(freqs, 2);
    CHECK(table.at(0) == 0);
    CHECK(table.at(1) == 1);
    CHECK(table.at(2) == 1);  // weights end (5, 5)
}

TEST_CASE("off greedy singleton and empty") {
    CHECK(off_greedy_assign({{7, 1}}, 4).at(7) == 0);
    CHECK(off_greedy_assign({}, 4).empty());
}

namespace {

// Independent LPT oracle: same rule, written against sorted pairs with no
// shared code path.
std::uint64_t lpt_makespan(std::vector<std::pair<KeyId, std::uint64_t>> items,
                           std::uint32_t workers) {
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::uint64_t> bins(workers, 0);
    for (const auto& [key, weight] : items) {
        auto it = std::min_element(bins.begin(), bins.end());
        *it += weight;
    }
    return *std::max_element(bins.begin(), bins.end());
}

// Exhaustive optimal makespan for small instances.
std::uint64_t optimal_makespan(const std::vector<std::uint64_t>& weights,
                               std::uint32_t workers) {
    const std::size_t n = weights.size();
    std::uint64_t best = ~0ULL;
    std::vector<std::uint32_t> assign(n, 0);
    for (;;) {
        std::vector<std::uint64_t> bins(workers, 0);
        for (std::size_t i = 0; i < n; ++i) bins[assign[i]] += weights[i];
        best = std::min(best, *std::max_element(bins.begin(), bins.end()));
        std::size_t i = 0;
        while (i < n && ++assign[i] == workers) assign[i++] = 0;
        if (i == n) break;
    }
    return best;
}

}  // namespace

TEST_CASE("off greedy matches an independent LPT oracle and brackets optimum") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const std::uint32_t w = 3;
        KeyFrequencyTable freqs;
        std::vector<std::pair<KeyId, std::uint64_t>> items;
        std::vector<std::uint64_t> weights;
        for (KeyId k = 0; k < 12; ++k) {
            const std::uint64_t c = 1 + rng() % 20;
            freqs[k] = c;
            items.emplace_back(k, c);
            weights.push_back(c);
        }
        const RoutingTable table = off_greedy_assign(freqs, w);
        std::vector<std::uint64_t> bins(w, 0);
        for (const auto& [key, worker] : table) bins[worker] += freqs[key];
        const std::uint64_t makespan = *std::max_element(bins.begin(), bins.end());

        CHECK(makespan == lpt_makespan(items, w));

        const std::uint64_t opt = optimal_makespan(weights, w);
        CHECK(makespan >= opt);
        // Graham's LPT bound: makespan <= (4/3 - 1/(3W)) * OPT.
        CHECK(static_cast<double>(makespan) <=
              (4.0 / 3.0 - 1.0 / (3.0 * w)) * static_cast<double>(opt) + 1e-9);
    }
}

TEST_CASE("pkg routes to the less loaded choice, h1 on ties") {
    HashFamily family(1, 2, 8);
    KeyId key = 0;
    while (family.choice(0, key) == family.choice(1, key)) ++key;
    const WorkerId c1 = family.choice(0, key);
    const WorkerId c2 = family.choice(1, key);

    LoadVector loads(8, 0);
    loads[c1] = 3;
    loads[c2] = 1;
    CHECK(pkg_route(family, key, loads) == c2);
    loads[c2] = 3;
    CHECK(pkg_route(family, key, loads) == c1);
}

TEST_CASE("a single repeated key alternates between its two choices") {
    HashFamily family(1, 2, 8);
    KeyId key = 0;
    while (family.choice(0, key) == family.choice(1, key)) ++key;
    const WorkerId c1 = family.choice(0, key);
    const WorkerId c2 = family.choice(1, key);

    LoadVector loads(8, 0);
    const int t = 50;
    for (int i = 0; i < 2 * t; ++i)
        record_route(loads, pkg_route(family, key, loads));
    CHECK(loads[c1] == t);
    CHECK(loads[c2] == t);
}

TEST_CASE("pkg destinations always come from the key's choices") {
    HashFamily family(77, 2, 16);
    LoadVector loads(16, 0);
    std::mt19937_64 rng(5);
    std::unordered_map<KeyId, std::set<WorkerId>> destinations;
    for (int i = 0; i < 20000; ++i) {
        const KeyId key = rng() % 100;
        const WorkerId dest = pkg_route(family, key, loads);
        const auto c = family.choices(key);
        CHECK(std::find(c.begin(), c.end(), dest) != c.end());
        destinations[key].insert(dest);
        record_route(loads, dest);
    }
    for (const auto& [key, dests] : destinations) CHECK(dests.size() <= 2);
}
