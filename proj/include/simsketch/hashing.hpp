#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace simsketch {

/// 64-bit FNV-1a over `seed` (8 bytes, little-endian) followed by `bytes`.
std::uint64_t seeded_fnv1a64(std::uint64_t seed, std::string_view bytes) noexcept;

/// seeded_fnv1a64 followed by the 64-bit avalanche finalizer
/// (x ^= x >> 33; x *= 0xff51afd7ed558ccd; x ^= x >> 33; x *= 0xc4ceb9fe1a85ec53;
/// x ^= x >> 33). Plain FNV-1a leaves its low bits a near-linear function of the
/// input's low bits, which shows up as skew after `mod range`.
std::uint64_t element_digest(std::uint64_t seed, std::string_view element) noexcept;

/// Seed used by row `row` of a count-min sketch whose base seed is `base`.
/// Row 0 uses the base seed itself, so a one-row sketch hashes exactly like a
/// one-function counting Bloom filter with the same seed.
std::uint64_t derive_row_seed(std::uint64_t base, std::uint32_t row) noexcept;

/// Deterministic family of k position functions over [0, range).
///
/// Position i of an element is (h1 + i * h2) mod range with wrapping 64-bit
/// arithmetic, where h1 = element_digest(seed, e) and
/// h2 = element_digest(seed ^ kSecondDigestTweak, e) | 1. The layout is part
/// of the exchange format; see docs/hashing.md.
class HashFamily {
public:
    static constexpr std::uint64_t kSecondDigestTweak = 0x9E3779B97F4A7C15ULL;

    /// Throws std::invalid_argument when k or range is 0.
    HashFamily(std::uint64_t seed, std::uint32_t k, std::uint32_t range);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint32_t k() const noexcept { return k_; }
    std::uint32_t range() const noexcept { return range_; }

    /// Writes the k positions of `element` into `out` (out.size() must be k).
    void positions(std::string_view element, std::span<std::uint32_t> out) const;
    std::vector<std::uint32_t> positions(std::string_view element) const;

    /// Position of the first function only; what a k=1 structure uses.
    std::uint32_t first_position(std::string_view element) const noexcept;

    friend bool operator==(const HashFamily&, const HashFamily&) = default;

private:
    std::uint64_t seed_;
    std::uint32_t k_;
    std::uint32_t range_;
};

}  // namespace simsketch
