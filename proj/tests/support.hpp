#pragma once

// Test-only generators and brute-force references. Nothing here calls the
// sketch or metric code under test.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "simsketch/hashing.hpp"
#include "simsketch/multiset.hpp"

namespace simsketch::testing {

inline std::string random_token(std::mt19937_64& rng, std::size_t len = 10) {
    std::string s(len, ' ');
    for (char& c : s) c = static_cast<char>('!' + rng() % 94);
    return s;
}

/// Random multiset drawn from a shared vocabulary so that pairs overlap.
inline Multiset random_multiset(std::mt19937_64& rng, const std::vector<std::string>& vocab,
                                std::size_t distinct, std::uint64_t max_count) {
    Multiset m;
    while (m.distinct_count() < std::min(distinct, vocab.size())) {
        m.insert(vocab[rng() % vocab.size()], 1 + rng() % max_count);
    }
    return m;
}

inline std::vector<std::string> vocabulary(std::mt19937_64& rng, std::size_t size) {
    std::vector<std::string> v;
    while (v.size() < size) {
        auto t = random_token(rng);
        if (std::find(v.begin(), v.end(), t) == v.end()) v.push_back(t);
    }
    return v;
}

/// Direct Dice from element counts: 2 * sum(min) / (|X| + |Y|).
inline double brute_dice(const Multiset& x, const Multiset& y) {
    std::uint64_t inter = 0;
    for (const auto& [e, c] : x) inter += std::min(c, y.count(e));
    return 2.0 * static_cast<double>(inter) /
           static_cast<double>(x.cardinality() + y.cardinality());
}

/// Counter vector of a length-n CBF computed straight from the positions.
inline std::vector<std::uint64_t> brute_counters(const Multiset& m, const HashFamily& f) {
    std::vector<std::uint64_t> c(f.range(), 0);
    for (const auto& [e, count] : m) {
        for (auto p : f.positions(e)) c[p] += count;
    }
    return c;
}

/// Smallest seed for which no two distinct elements of `elements` share a
/// cell under a k=1 family of the given range.
inline std::uint64_t collision_free_seed(const std::vector<std::string>& elements,
                                         std::uint32_t range) {
    for (std::uint64_t seed = 0;; ++seed) {
        HashFamily f(seed, 1, range);
        std::vector<bool> used(range, false);
        bool ok = true;
        for (const auto& e : elements) {
            const auto p = f.first_position(e);
            if (used[p]) {
                ok = false;
                break;
            }
            used[p] = true;
        }
        if (ok) return seed;
    }
}

}  // namespace simsketch::testing
