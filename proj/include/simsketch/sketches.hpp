#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "simsketch/hashing.hpp"
#include "simsketch/multiset.hpp"

namespace simsketch {

using Counter = std::uint32_t;
inline constexpr Counter kCounterMax = std::numeric_limits<Counter>::max();

/// Wire codes of the three structures.
enum class StructureKind : std::uint8_t {
    bloom_filter = 0,
    counting_bloom_filter = 1,
    count_min_sketch = 2,
};

const char* to_string(StructureKind kind) noexcept;

/// n-bit membership filter. Bits are packed LSB-first: bit j lives in
/// byte j / 8 at bit position j % 8, which is also the wire layout.
class BloomFilter {
public:
    BloomFilter(std::uint32_t length, std::uint32_t k, std::uint64_t seed = 0);
    /// Restores a filter from packed bits; throws std::invalid_argument on a size mismatch.
    BloomFilter(HashFamily family, std::vector<std::uint8_t> packed_bits);

    void insert(std::string_view element);
    bool contains(std::string_view element) const;

    bool test(std::uint32_t position) const noexcept;
    std::size_t popcount() const noexcept;

    const HashFamily& family() const noexcept { return family_; }
    std::uint32_t length() const noexcept { return family_.range(); }
    std::uint32_t hash_count() const noexcept { return family_.k(); }
    std::uint64_t seed() const noexcept { return family_.seed(); }
    std::span<const std::uint8_t> packed_bits() const noexcept { return bits_; }

    friend bool operator==(const BloomFilter&, const BloomFilter&) = default;

private:
    HashFamily family_;
    std::vector<std::uint8_t> bits_;
};

/// Counting Bloom filter with 32-bit saturating counters.
///
/// Every insertion of `times` instances adds `times` to each of the k cells
/// named by the hash family, twice if double hashing names a cell twice, so
/// that without saturation the counters sum to k * total_insertions().
class CountingBloomFilter {
public:
    CountingBloomFilter(std::uint32_t length, std::uint32_t k, std::uint64_t seed = 0);
    /// Restores a filter from its counters. `projection_depth` > 1 marks a
    /// filter obtained by summing the rows of a count-min sketch.
    CountingBloomFilter(HashFamily family, std::vector<Counter> counters,
                        std::uint64_t total_insertions, std::uint32_t projection_depth = 1);

    /// Throws std::invalid_argument for an empty element or times == 0.
    void insert(std::string_view element, std::uint64_t times = 1);

    /// Smallest counter among the element's cells; never below the true count.
    Counter estimate_count(std::string_view element) const;

    const HashFamily& family() const noexcept { return family_; }
    std::uint32_t length() const noexcept { return family_.range(); }
    std::uint32_t hash_count() const noexcept { return family_.k(); }
    std::uint64_t seed() const noexcept { return family_.seed(); }
    std::uint32_t projection_depth() const noexcept { return projection_depth_; }
    std::uint64_t total_insertions() const noexcept { return total_insertions_; }
    bool saturated() const noexcept { return saturated_; }
    std::span<const Counter> counters() const noexcept { return counters_; }

    friend bool operator==(const CountingBloomFilter&, const CountingBloomFilter&) = default;

private:
    HashFamily family_;
    std::vector<Counter> counters_;
    std::uint64_t total_insertions_ = 0;
    std::uint32_t projection_depth_ = 1;
    bool saturated_ = false;
};

/// d x w count-min sketch with one single-function hash family per row.
/// Row r hashes with derive_row_seed(seed, r); the table is row-major.
class CountMinSketch {
public:
    CountMinSketch(std::uint32_t width, std::uint32_t depth, std::uint64_t seed = 0);
    CountMinSketch(std::uint32_t width, std::uint32_t depth, std::uint64_t seed,
                   std::vector<Counter> table, std::uint64_t total_insertions);

    void insert(std::string_view element, std::uint64_t times = 1);
    Counter estimate_count(std::string_view element) const;

    std::uint32_t width() const noexcept { return width_; }
    std::uint32_t depth() const noexcept { return static_cast<std::uint32_t>(rows_.size()); }
    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t total_insertions() const noexcept { return total_insertions_; }
    bool saturated() const noexcept { return saturated_; }

    const HashFamily& row_family(std::uint32_t row) const { return rows_.at(row); }
    std::span<const Counter> row(std::uint32_t r) const;
    std::span<const Counter> table() const noexcept { return table_; }

    friend bool operator==(const CountMinSketch&, const CountMinSketch&) = default;

private:
    std::uint32_t width_;
    std::uint64_t seed_;
    std::vector<HashFamily> rows_;
    std::vector<Counter> table_;
    std::uint64_t total_insertions_ = 0;
    bool saturated_ = false;
};

using Sketch = std::variant<BloomFilter, CountingBloomFilter, CountMinSketch>;

StructureKind kind_of(const Sketch& sketch) noexcept;

/// Shape of a sketch to build. `hashes` is k for the Bloom filters and the
/// depth d for a count-min sketch.
struct SketchParams {
    StructureKind kind = StructureKind::counting_bloom_filter;
    std::uint32_t width = 128;
    std::uint32_t hashes = 1;
    std::uint64_t seed = 0;

    friend bool operator==(const SketchParams&, const SketchParams&) = default;
};

BloomFilter build_bloom_filter(const Multiset& m, std::uint32_t length, std::uint32_t k,
                               std::uint64_t seed = 0);
CountingBloomFilter build_counting_bloom_filter(const Multiset& m, std::uint32_t length,
                                                std::uint32_t k, std::uint64_t seed = 0);
CountMinSketch build_count_min_sketch(const Multiset& m, std::uint32_t width,
                                      std::uint32_t depth, std::uint64_t seed = 0);
Sketch build_sketch(const Multiset& m, const SketchParams& params);

/// Sums the rows of `s` into a length-w counting filter.
///
/// The projection is lossy: the result hashes with row 0's family (k = 1),
/// so point queries stay upper bounds, but its counters total d times the
/// insertions and it is only comparable with other projections of equal depth.
CountingBloomFilter cms_to_cbf(const CountMinSketch& s);

}  // namespace simsketch
