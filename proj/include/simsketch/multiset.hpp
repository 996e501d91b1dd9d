#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace simsketch {

/// Exact multiset of opaque byte-string elements with 64-bit multiplicities.
///
/// Absent elements have count 0; no stored entry ever has count 0. Iteration
/// order is the lexicographic byte order of the elements.
class Multiset {
public:
    using Entries = std::map<std::string, std::uint64_t, std::less<>>;

    Multiset() = default;

    /// Adds `times` instances of `element`.
    ///
    /// Throws std::invalid_argument for an empty element or times == 0 and
    /// std::overflow_error when the element's count would exceed 2^64-1.
    /// The multiset is unchanged when an exception is thrown.
    Multiset& insert(std::string_view element, std::uint64_t times = 1);

    std::uint64_t count(std::string_view element) const;

    /// Sum of all multiplicities.
    std::uint64_t cardinality() const noexcept { return cardinality_; }
    std::size_t distinct_count() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    const Entries& entries() const noexcept { return entries_; }
    Entries::const_iterator begin() const noexcept { return entries_.begin(); }
    Entries::const_iterator end() const noexcept { return entries_.end(); }

    friend bool operator==(const Multiset&, const Multiset&) = default;

private:
    Entries entries_;
    std::uint64_t cardinality_ = 0;
};

/// Sum over shared elements of the smaller multiplicity.
std::uint64_t intersection_cardinality(const Multiset& x, const Multiset& y);

/// 2 * |X ∩ Y| / (|X| + |Y|). Throws UndefinedSimilarity when both are empty.
double dice(const Multiset& x, const Multiset& y);

/// Cosine of the count vectors aligned by element. Throws UndefinedSimilarity
/// when either multiset is empty.
double cosine(const Multiset& x, const Multiset& y);

}  // namespace simsketch
