#include "simsketch/sketches.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

#include "simsketch/kernels.hpp"

namespace simsketch {

namespace {

void require_element(std::string_view element) {
    if (element.empty()) {
        throw std::invalid_argument("sketch element must be non-empty");
    }
}

void require_times(std::uint64_t times) {
    if (times == 0) {
        throw std::invalid_argument("insert count must be at least 1");
    }
}

// Returns true when the counter clamped.
bool saturating_add(Counter& c, std::uint64_t times) noexcept {
    if (times >= static_cast<std::uint64_t>(kCounterMax - c)) {
        const bool clamped = times > static_cast<std::uint64_t>(kCounterMax - c);
        c = kCounterMax;
        return clamped;
    }
    c += static_cast<Counter>(times);
    return false;
}

std::uint64_t saturating_total(std::uint64_t total, std::uint64_t times) noexcept {
    return total > UINT64_MAX - times ? UINT64_MAX : total + times;
}

constexpr std::size_t packed_size(std::uint32_t bits) noexcept {
    return (static_cast<std::size_t>(bits) + 7) / 8;
}

}  // namespace

const char* to_string(StructureKind kind) noexcept {
    switch (kind) {
        case StructureKind::bloom_filter:
            return "bf";
        case StructureKind::counting_bloom_filter:
            return "cbf";
        case StructureKind::count_min_sketch:
            return "cms";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------

BloomFilter::BloomFilter(std::uint32_t length, std::uint32_t k, std::uint64_t seed)
    : family_(seed, k, length), bits_(packed_size(length), 0) {}

BloomFilter::BloomFilter(HashFamily family, std::vector<std::uint8_t> packed_bits)
    : family_(family), bits_(std::move(packed_bits)) {
    if (bits_.size() != packed_size(family_.range())) {
        throw std::invalid_argument("packed bit vector has the wrong size");
    }
    const unsigned tail = family_.range() % 8;
    if (tail != 0 && (bits_.back() >> tail) != 0) {
        throw std::invalid_argument("padding bits of a Bloom filter must be zero");
    }
}

void BloomFilter::insert(std::string_view element) {
    require_element(element);
    std::vector<std::uint32_t> pos(family_.k());
    family_.positions(element, pos);
    for (std::uint32_t p : pos) {
        bits_[p / 8] = static_cast<std::uint8_t>(bits_[p / 8] | (1U << (p % 8)));
    }
}

bool BloomFilter::contains(std::string_view element) const {
    std::vector<std::uint32_t> pos(family_.k());
    family_.positions(element, pos);
    return std::all_of(pos.begin(), pos.end(), [this](std::uint32_t p) { return test(p); });
}

bool BloomFilter::test(std::uint32_t position) const noexcept {
    return position < length() && ((bits_[position / 8] >> (position % 8)) & 1U) != 0;
}

std::size_t BloomFilter::popcount() const noexcept {
    std::size_t total = 0;
    for (std::uint8_t b : bits_) {
        total += static_cast<std::size_t>(std::popcount(b));
    }
    return total;
}

// ---------------------------------------------------------------------------

CountingBloomFilter::CountingBloomFilter(std::uint32_t length, std::uint32_t k,
                                         std::uint64_t seed)
    : family_(seed, k, length), counters_(length, 0) {}

CountingBloomFilter::CountingBloomFilter(HashFamily family, std::vector<Counter> counters,
                                         std::uint64_t total_insertions,
                                         std::uint32_t projection_depth)
    : family_(family),
      counters_(std::move(counters)),
      total_insertions_(total_insertions),
      projection_depth_(projection_depth) {
    if (counters_.size() != family_.range()) {
        throw std::invalid_argument("counter vector length must equal the filter length");
    }
    if (projection_depth_ == 0) {
        throw std::invalid_argument("projection depth must be at least 1");
    }
    saturated_ = std::find(counters_.begin(), counters_.end(), kCounterMax) != counters_.end();
}

void CountingBloomFilter::insert(std::string_view element, std::uint64_t times) {
    require_element(element);
    require_times(times);
    std::vector<std::uint32_t> pos(family_.k());
    family_.positions(element, pos);
    for (std::uint32_t p : pos) {
        saturated_ |= saturating_add(counters_[p], times);
        saturated_ |= counters_[p] == kCounterMax;
    }
    total_insertions_ = saturating_total(total_insertions_, times);
}

Counter CountingBloomFilter::estimate_count(std::string_view element) const {
    std::vector<std::uint32_t> pos(family_.k());
    family_.positions(element, pos);
    Counter best = kCounterMax;
    for (std::uint32_t p : pos) {
        best = std::min(best, counters_[p]);
    }
    return best;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<HashFamily> row_families(std::uint32_t width, std::uint32_t depth,
                                     std::uint64_t seed) {
    if (depth == 0) {
        throw std::invalid_argument("count-min sketch depth must be at least 1");
    }
    if (width == 0) {
        throw std::invalid_argument("count-min sketch width must be at least 1");
    }
    std::vector<HashFamily> rows;
    rows.reserve(depth);
    for (std::uint32_t r = 0; r < depth; ++r) {
        rows.emplace_back(derive_row_seed(seed, r), 1, width);
    }
    return rows;
}

}  // namespace

CountMinSketch::CountMinSketch(std::uint32_t width, std::uint32_t depth, std::uint64_t seed)
    : width_(width),
      seed_(seed),
      rows_(row_families(width, depth, seed)),
      table_(static_cast<std::size_t>(width) * depth, 0) {}

CountMinSketch::CountMinSketch(std::uint32_t width, std::uint32_t depth, std::uint64_t seed,
                               std::vector<Counter> table, std::uint64_t total_insertions)
    : width_(width),
      seed_(seed),
      rows_(row_families(width, depth, seed)),
      table_(std::move(table)),
      total_insertions_(total_insertions) {
    if (table_.size() != static_cast<std::size_t>(width) * depth) {
        throw std::invalid_argument("count-min table size must equal width * depth");
    }
    saturated_ = std::find(table_.begin(), table_.end(), kCounterMax) != table_.end();
}

void CountMinSketch::insert(std::string_view element, std::uint64_t times) {
    require_element(element);
    require_times(times);
    for (std::uint32_t r = 0; r < depth(); ++r) {
        Counter& cell = table_[static_cast<std::size_t>(r) * width_ +
                               rows_[r].first_position(element)];
        saturated_ |= saturating_add(cell, times);
        saturated_ |= cell == kCounterMax;
    }
    total_insertions_ = saturating_total(total_insertions_, times);
}

Counter CountMinSketch::estimate_count(std::string_view element) const {
    Counter best = kCounterMax;
    for (std::uint32_t r = 0; r < depth(); ++r) {
        best = std::min(best, table_[static_cast<std::size_t>(r) * width_ +
                                     rows_[r].first_position(element)]);
    }
    return best;
}

std::span<const Counter> CountMinSketch::row(std::uint32_t r) const {
    if (r >= depth()) {
        throw std::out_of_range("count-min row index out of range");
    }
    return std::span<const Counter>(table_).subspan(static_cast<std::size_t>(r) * width_,
                                                    width_);
}

// ---------------------------------------------------------------------------

StructureKind kind_of(const Sketch& sketch) noexcept {
    return static_cast<StructureKind>(sketch.index());
}

BloomFilter build_bloom_filter(const Multiset& m, std::uint32_t length, std::uint32_t k,
                               std::uint64_t seed) {
    BloomFilter b(length, k, seed);
    for (const auto& [element, _] : m) {
        b.insert(element);
    }
    return b;
}

CountingBloomFilter build_counting_bloom_filter(const Multiset& m, std::uint32_t length,
                                                std::uint32_t k, std::uint64_t seed) {
    CountingBloomFilter c(length, k, seed);
    for (const auto& [element, count] : m) {
        c.insert(element, count);
    }
    return c;
}

CountMinSketch build_count_min_sketch(const Multiset& m, std::uint32_t width,
                                      std::uint32_t depth, std::uint64_t seed) {
    CountMinSketch s(width, depth, seed);
    for (const auto& [element, count] : m) {
        s.insert(element, count);
    }
    return s;
}

Sketch build_sketch(const Multiset& m, const SketchParams& params) {
    switch (params.kind) {
        case StructureKind::bloom_filter:
            return build_bloom_filter(m, params.width, params.hashes, params.seed);
        case StructureKind::counting_bloom_filter:
            return build_counting_bloom_filter(m, params.width, params.hashes, params.seed);
        case StructureKind::count_min_sketch:
            return build_count_min_sketch(m, params.width, params.hashes, params.seed);
    }
    throw std::invalid_argument("unknown structure kind");
}

CountingBloomFilter cms_to_cbf(const CountMinSketch& s) {
    std::vector<Counter> sums(s.row(0).begin(), s.row(0).end());
    for (std::uint32_t r = 1; r < s.depth(); ++r) {
        kernels::saturating_accumulate(sums, s.row(r));
    }
    const std::uint64_t total =
        s.total_insertions() > UINT64_MAX / s.depth() ? UINT64_MAX
                                                      : s.total_insertions() * s.depth();
    // Row 0's family keeps point queries on the projection an upper bound.
    return CountingBloomFilter(s.row_family(0), std::move(sums), total, s.depth());
}

}  // namespace simsketch
