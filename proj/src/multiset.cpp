#include "simsketch/multiset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "simsketch/errors.hpp"

namespace simsketch {

using u128 = unsigned __int128;

Multiset& Multiset::insert(std::string_view element, std::uint64_t times) {
    if (element.empty()) {
        throw std::invalid_argument("multiset element must be non-empty");
    }
    if (times == 0) {
        throw std::invalid_argument("insert count must be at least 1");
    }
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    if (cardinality_ > kMax - times) {
        throw std::overflow_error("multiset cardinality overflows 64 bits");
    }
    auto it = entries_.find(element);
    if (it == entries_.end()) {
        entries_.emplace(std::string(element), times);
    } else {
        // Cannot overflow: the entry is bounded by the cardinality checked above.
        it->second += times;
    }
    cardinality_ += times;
    return *this;
}

std::uint64_t Multiset::count(std::string_view element) const {
    auto it = entries_.find(element);
    return it == entries_.end() ? 0 : it->second;
}

std::uint64_t intersection_cardinality(const Multiset& x, const Multiset& y) {
    // Merge walk over the two sorted key sequences.
    std::uint64_t total = 0;
    auto a = x.begin();
    auto b = y.begin();
    while (a != x.end() && b != y.end()) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            total += std::min(a->second, b->second);
            ++a;
            ++b;
        }
    }
    return total;
}

double dice(const Multiset& x, const Multiset& y) {
    const u128 denom = u128{x.cardinality()} + y.cardinality();
    if (denom == 0) {
        throw UndefinedSimilarity("dice of two empty multisets is undefined");
    }
    const u128 num = u128{intersection_cardinality(x, y)} * 2;
    return static_cast<double>(num) / static_cast<double>(denom);
}

namespace {

u128 squared_norm(const Multiset& m) {
    u128 s = 0;
    for (const auto& [_, c] : m) {
        s += u128{c} * c;
    }
    return s;
}

}  // namespace

double cosine(const Multiset& x, const Multiset& y) {
    if (x.empty() || y.empty()) {
        throw UndefinedSimilarity("cosine with an empty multiset is undefined");
    }
    u128 dot = 0;
    auto a = x.begin();
    auto b = y.begin();
    while (a != x.end() && b != y.end()) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            dot += u128{a->second} * b->second;
            ++a;
            ++b;
        }
    }
    // sqrt(v * v) == v exactly in IEEE arithmetic, so identical inputs give 1.
    const double denom = std::sqrt(static_cast<double>(squared_norm(x)) *
                                   static_cast<double>(squared_norm(y)));
    return std::min(1.0, static_cast<double>(dot) / denom);
}

}  // namespace simsketch
