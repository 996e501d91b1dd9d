#include "simsketch/sketches.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <stdexcept>

#include "support.hpp"

namespace simsketch {
namespace {

std::uint64_t counter_sum(std::span<const Counter> c) {
    return std::accumulate(c.begin(), c.end(), std::uint64_t{0});
}

TEST(BloomFilter, InsertThenContains) {
    BloomFilter b(7, 2);
    EXPECT_FALSE(b.contains("e1"));
    b.insert("e1");
    EXPECT_TRUE(b.contains("e1"));
    EXPECT_LE(b.popcount(), 2U);
    EXPECT_GE(b.popcount(), 1U);
    EXPECT_THROW(b.insert(""), std::invalid_argument);
}

TEST(BloomFilter, EmptyFilterContainsNothing) {
    std::mt19937_64 rng(1);
    BloomFilter b(64, 3);
    for (int i = 0; i < 1000; ++i) EXPECT_FALSE(b.contains(testing::random_token(rng)));
    EXPECT_EQ(b.popcount(), 0U);
}

TEST(BloomFilter, FalsePositiveRate) {
    std::mt19937_64 rng(2);
    BloomFilter b(1024, 2);
    std::vector<std::string> inserted;
    for (int i = 0; i < 100; ++i) {
        inserted.push_back("in-" + testing::random_token(rng));
        b.insert(inserted.back());
    }
    for (const auto& e : inserted) EXPECT_TRUE(b.contains(e));
    int hits = 0;
    const int probes = 10000;
    for (int i = 0; i < probes; ++i) hits += b.contains("out-" + testing::random_token(rng));
    // (1 - e^{-km/n})^k = (1 - e^{-200/1024})^2 ~= 0.031
    EXPECT_LT(static_cast<double>(hits) / probes, 0.05);
}

TEST(BloomFilter, RestoreValidatesSize) {
    EXPECT_THROW(BloomFilter(HashFamily(0, 1, 9), std::vector<std::uint8_t>(1)),
                 std::invalid_argument);
    // Bit 9 is padding for a 9-bit filter.
    EXPECT_THROW(BloomFilter(HashFamily(0, 1, 9), std::vector<std::uint8_t>{0, 2}),
                 std::invalid_argument);
}

TEST(CountingBloomFilter, SingleInsert) {
    CountingBloomFilter c(16, 1);
    c.insert("a", 3);
    int threes = 0;
    for (Counter v : c.counters()) {
        if (v == 3) ++threes;
        else EXPECT_EQ(v, 0U);
    }
    EXPECT_EQ(threes, 1);
    EXPECT_EQ(c.estimate_count("a"), 3U);
    EXPECT_EQ(c.total_insertions(), 3U);
    EXPECT_THROW(c.insert("a", 0), std::invalid_argument);
    EXPECT_THROW(c.insert("", 1), std::invalid_argument);
}

TEST(CountingBloomFilter, CounterSumIsKTimesCardinality) {
    std::mt19937_64 rng(4);
    const auto vocab = testing::vocabulary(rng, 200);
    for (int trial = 0; trial < 50; ++trial) {
        const Multiset m = testing::random_multiset(rng, vocab, 40, 9);
        const auto c = build_counting_bloom_filter(m, 97, 2, trial);
        EXPECT_EQ(counter_sum(c.counters()), 2 * m.cardinality());
        const auto brute = testing::brute_counters(m, c.family());
        for (std::size_t i = 0; i < brute.size(); ++i) EXPECT_EQ(c.counters()[i], brute[i]);
    }
}

TEST(CountingBloomFilter, FreshEstimateIsZero) {
    CountingBloomFilter c(32, 3);
    EXPECT_EQ(c.estimate_count("never"), 0U);
}

TEST(CountingBloomFilter, CollidingElementsAdd) {
    const HashFamily f(0, 1, 4);
    std::string partner;
    for (int i = 0; partner.empty(); ++i) {
        const std::string candidate = "b" + std::to_string(i);
        if (f.first_position(candidate) == f.first_position("a")) partner = candidate;
    }
    CountingBloomFilter c(4, 1);
    c.insert("a", 2);
    c.insert(partner, 3);
    EXPECT_EQ(c.estimate_count("a"), 5U);
    EXPECT_EQ(c.estimate_count(partner), 5U);
}

TEST(CountingBloomFilter, SaturatesInsteadOfWrapping) {
    CountingBloomFilter c(8, 1);
    c.insert("hot", 0xFFFFFFF0ULL);
    EXPECT_FALSE(c.saturated());
    c.insert("hot", 0x100);
    EXPECT_TRUE(c.saturated());
    EXPECT_EQ(c.estimate_count("hot"), kCounterMax);
    c.insert("hot", 1ULL << 40);
    EXPECT_EQ(c.estimate_count("hot"), kCounterMax);
}

TEST(CountMinSketch, FreshAndUpperBound) {
    CountMinSketch s(50, 4, 3);
    EXPECT_EQ(s.estimate_count("x"), 0U);
    std::mt19937_64 rng(5);
    const auto vocab = testing::vocabulary(rng, 300);
    const Multiset m = testing::random_multiset(rng, vocab, 120, 7);
    const auto built = build_count_min_sketch(m, 50, 4, 3);
    for (const auto& [e, c] : m) EXPECT_GE(built.estimate_count(e), c);
    EXPECT_EQ(built.total_insertions(), m.cardinality());
    EXPECT_THROW(CountMinSketch(0, 1), std::invalid_argument);
    EXPECT_THROW(CountMinSketch(1, 0), std::invalid_argument);
}

TEST(CountMinSketch, RowSumsEqualWithoutSaturation) {
    std::mt19937_64 rng(6);
    const auto vocab = testing::vocabulary(rng, 100);
    const Multiset m = testing::random_multiset(rng, vocab, 60, 30);
    const auto s = build_count_min_sketch(m, 37, 6, 11);
    for (std::uint32_t r = 0; r < s.depth(); ++r) {
        EXPECT_EQ(counter_sum(s.row(r)), m.cardinality()) << "row " << r;
    }
    EXPECT_THROW(s.row(6), std::out_of_range);
}

TEST(CountMinSketch, OneRowMatchesOneHashCbf) {
    std::mt19937_64 rng(7);
    const auto vocab = testing::vocabulary(rng, 200);
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
        const Multiset m = testing::random_multiset(rng, vocab, 80, 5);
        const auto cbf = build_counting_bloom_filter(m, 61, 1, seed);
        const auto cms = build_count_min_sketch(m, 61, 1, seed);
        EXPECT_TRUE(std::ranges::equal(cbf.counters(), cms.row(0)));
        for (const auto& e : vocab) EXPECT_EQ(cbf.estimate_count(e), cms.estimate_count(e));
    }
}

TEST(Build, EmptyMultisetGivesZeroSketch) {
    const Multiset empty;
    EXPECT_EQ(build_bloom_filter(empty, 10, 2).popcount(), 0U);
    EXPECT_EQ(counter_sum(build_counting_bloom_filter(empty, 10, 2).counters()), 0U);
    EXPECT_EQ(counter_sum(build_count_min_sketch(empty, 10, 3).table()), 0U);
}

TEST(Build, OrderIndependent) {
    std::mt19937_64 rng(8);
    const auto vocab = testing::vocabulary(rng, 100);
    const Multiset m = testing::random_multiset(rng, vocab, 50, 6);
    std::vector<std::pair<std::string, std::uint64_t>> entries(m.begin(), m.end());

    CountingBloomFilter forward(64, 3, 5);
    for (const auto& [e, c] : entries) forward.insert(e, c);
    CountingBloomFilter backward(64, 3, 5);
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) backward.insert(it->first, it->second);
    CountingBloomFilter shuffled(64, 3, 5);
    std::shuffle(entries.begin(), entries.end(), rng);
    for (const auto& [e, c] : entries) shuffled.insert(e, c);

    EXPECT_EQ(forward, build_counting_bloom_filter(m, 64, 3, 5));
    EXPECT_EQ(forward, backward);
    EXPECT_EQ(forward, shuffled);

    CountMinSketch a(64, 4, 5);
    CountMinSketch b(64, 4, 5);
    for (const auto& [e, c] : entries) a.insert(e, c);
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) b.insert(it->first, it->second);
    EXPECT_EQ(a, b);
}

TEST(Build, DistinctCountsWithOneHash) {
    Multiset m;
    for (int i = 0; i < 64; ++i) m.insert("elem-" + std::to_string(i));
    EXPECT_EQ(counter_sum(build_counting_bloom_filter(m, 128, 1).counters()), 64U);
}

TEST(Build, DispatchesOnKind) {
    Multiset m;
    m.insert("a", 2);
    EXPECT_EQ(kind_of(build_sketch(m, {StructureKind::bloom_filter, 8, 2, 0})),
              StructureKind::bloom_filter);
    EXPECT_EQ(kind_of(build_sketch(m, {StructureKind::count_min_sketch, 8, 2, 0})),
              StructureKind::count_min_sketch);
    EXPECT_THROW(build_sketch(m, {StructureKind::counting_bloom_filter, 8, 0, 0}),
                 std::invalid_argument);
}

TEST(Projection, OneRowIsIdentity) {
    std::mt19937_64 rng(9);
    const auto vocab = testing::vocabulary(rng, 100);
    const Multiset m = testing::random_multiset(rng, vocab, 40, 4);
    const auto cms = build_count_min_sketch(m, 50, 1, 4);
    const auto cbf = cms_to_cbf(cms);
    EXPECT_EQ(cbf, build_counting_bloom_filter(m, 50, 1, 4));
}

TEST(Projection, SumsRows) {
    std::mt19937_64 rng(10);
    const auto vocab = testing::vocabulary(rng, 100);
    const Multiset m = testing::random_multiset(rng, vocab, 40, 4);
    const auto cms = build_count_min_sketch(m, 50, 2, 4);
    const auto cbf = cms_to_cbf(cms);
    EXPECT_EQ(counter_sum(cbf.counters()), 2 * m.cardinality());
    for (std::uint32_t j = 0; j < 50; ++j) {
        EXPECT_EQ(cbf.counters()[j], cms.row(0)[j] + cms.row(1)[j]);
    }
    EXPECT_EQ(cbf.projection_depth(), 2U);
    for (const auto& [e, c] : m) EXPECT_GE(cbf.estimate_count(e), c);

    EXPECT_EQ(counter_sum(cms_to_cbf(CountMinSketch(10, 3)).counters()), 0U);
}

TEST(Projection, FlagsSaturation) {
    // Width 1 puts "x" in the single column of both rows.
    CountMinSketch s(1, 2);
    s.insert("x", 0xC0000000ULL);
    EXPECT_FALSE(s.saturated());
    const auto cbf = cms_to_cbf(s);
    EXPECT_TRUE(cbf.saturated());
    EXPECT_EQ(cbf.estimate_count("x"), kCounterMax);
}

TEST(SketchProperties, NoFalseNegativesOrUnderestimates) {
    std::mt19937_64 rng(12);
    const auto vocab = testing::vocabulary(rng, 400);
    for (int trial = 0; trial < 1000; ++trial) {
        const Multiset m = testing::random_multiset(rng, vocab, 1 + rng() % 80, 1 + rng() % 12);
        const std::uint32_t n = 8 + static_cast<std::uint32_t>(rng() % 200);
        const std::uint32_t k = 1 + static_cast<std::uint32_t>(rng() % 5);
        const std::uint64_t seed = rng();
        const auto bf = build_bloom_filter(m, n, k, seed);
        const auto cbf = build_counting_bloom_filter(m, n, k, seed);
        const auto cms = build_count_min_sketch(m, n, k, seed);
        for (const auto& [e, c] : m) {
            ASSERT_TRUE(bf.contains(e));
            ASSERT_GE(cbf.estimate_count(e), c);
            ASSERT_GE(cms.estimate_count(e), c);
        }
    }
}

TEST(SketchProperties, OneHashCbfEqualsOneRowCms) {
    std::mt19937_64 rng(13);
    const auto vocab = testing::vocabulary(rng, 400);
    for (int trial = 0; trial < 200; ++trial) {
        const Multiset m = testing::random_multiset(rng, vocab, 1 + rng() % 80, 1 + rng() % 12);
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng() % 500);
        const std::uint64_t seed = rng();
        ASSERT_TRUE(std::ranges::equal(build_counting_bloom_filter(m, n, 1, seed).counters(),
                                       build_count_min_sketch(m, n, 1, seed).row(0)));
    }
}

}  // namespace
}  // namespace simsketch
