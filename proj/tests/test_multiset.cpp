#include "simsketch/multiset.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <random>
#include <stdexcept>

#include "simsketch/errors.hpp"
#include "support.hpp"

namespace simsketch {
namespace {

Multiset ms(std::initializer_list<std::pair<const char*, std::uint64_t>> entries) {
    Multiset m;
    for (const auto& [e, c] : entries) m.insert(e, c);
    return m;
}

TEST(Multiset, InsertAccumulates) {
    Multiset m;
    m.insert("a", 2);
    EXPECT_EQ(m, ms({{"a", 2}}));
    m.insert("a", 1);
    EXPECT_EQ(m.count("a"), 3U);
    m.insert("b", 5);
    EXPECT_EQ(m, ms({{"a", 3}, {"b", 5}}));
    EXPECT_EQ(m.cardinality(), 8U);
    EXPECT_EQ(m.distinct_count(), 2U);
    EXPECT_EQ(m.count("zzz"), 0U);
}

TEST(Multiset, RejectsEmptyElementAndZeroTimes) {
    Multiset m;
    EXPECT_THROW(m.insert("", 1), std::invalid_argument);
    EXPECT_THROW(m.insert("a", 0), std::invalid_argument);
    EXPECT_TRUE(m.empty());
}

TEST(Multiset, RejectsCounterOverflowWithoutChangingState) {
    Multiset m;
    m.insert("a", std::numeric_limits<std::uint64_t>::max() - 1);
    EXPECT_THROW(m.insert("a", 2), std::overflow_error);
    EXPECT_THROW(m.insert("b", 2), std::overflow_error);
    EXPECT_EQ(m.count("a"), std::numeric_limits<std::uint64_t>::max() - 1);
    EXPECT_EQ(m.distinct_count(), 1U);
}

TEST(Oracle, IntersectionCardinality) {
    EXPECT_EQ(intersection_cardinality(ms({{"a", 2}, {"b", 1}}), ms({{"a", 1}, {"c", 4}})), 1U);
    EXPECT_EQ(intersection_cardinality(ms({{"a", 1}}), ms({{"b", 1}})), 0U);
    const Multiset x = ms({{"a", 3}, {"q", 9}});
    EXPECT_EQ(intersection_cardinality(x, x), x.cardinality());
}

TEST(Oracle, DiceExamples) {
    EXPECT_DOUBLE_EQ(dice(ms({{"a", 2}, {"b", 1}}), ms({{"a", 1}, {"c", 1}})), 0.4);
    EXPECT_EQ(dice(ms({{"a", 1}}), ms({{"b", 1}})), 0.0);
    const Multiset x = ms({{"a", 3}, {"q", 9}});
    EXPECT_EQ(dice(x, x), 1.0);
    EXPECT_EQ(dice(x, Multiset{}), 0.0);
    EXPECT_THROW(dice(Multiset{}, Multiset{}), UndefinedSimilarity);
}

TEST(Oracle, CosineExamples) {
    const Multiset x = ms({{"a", 3}, {"b", 4}});
    EXPECT_EQ(cosine(x, x), 1.0);
    EXPECT_EQ(cosine(x, ms({{"a", 3}, {"b", 4}})), 1.0);
    EXPECT_EQ(cosine(ms({{"a", 1}}), ms({{"b", 1}})), 0.0);
    // (3*3) / (5 * 3)
    EXPECT_DOUBLE_EQ(cosine(x, ms({{"a", 3}})), 0.6);
    EXPECT_THROW(cosine(x, Multiset{}), UndefinedSimilarity);
    EXPECT_THROW(cosine(Multiset{}, x), UndefinedSimilarity);
}

TEST(OracleProperties, RandomPairs) {
    std::mt19937_64 rng(11);
    const auto vocab = testing::vocabulary(rng, 60);
    for (int trial = 0; trial < 500; ++trial) {
        const Multiset x = testing::random_multiset(rng, vocab, 1 + rng() % 30, 1 + rng() % 20);
        const Multiset y = testing::random_multiset(rng, vocab, 1 + rng() % 30, 1 + rng() % 20);
        bool shared = false;
        for (const auto& [e, _] : x) shared |= y.count(e) > 0;

        EXPECT_EQ(dice(x, y), dice(y, x));
        EXPECT_EQ(cosine(x, y), cosine(y, x));
        EXPECT_EQ(dice(x, x), 1.0);
        EXPECT_EQ(cosine(x, x), 1.0);
        EXPECT_DOUBLE_EQ(dice(x, y), testing::brute_dice(x, y));
        EXPECT_GE(dice(x, y), 0.0);
        EXPECT_LE(dice(x, y), 1.0);
        EXPECT_LE(cosine(x, y), 1.0);
        EXPECT_EQ(dice(x, y) == 0.0, !shared);
        EXPECT_EQ(cosine(x, y) == 0.0, !shared);
        EXPECT_LE(intersection_cardinality(x, y), std::min(x.cardinality(), y.cardinality()));
    }
}

}  // namespace
}  // namespace simsketch
