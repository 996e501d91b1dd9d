#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "simsketch/kernels.hpp"
#include "simsketch/sketches.hpp"

namespace simsketch {

enum class Metric { dice, cosine };

const char* to_string(Metric metric) noexcept;

/// Everything two sketches must share to be compared position by position.
struct CompatibilityWitness {
    StructureKind kind;
    std::uint32_t width;       // n or w
    std::uint32_t depth;       // d; 1 for Bloom filters unless projected from a CMS
    std::uint32_t hash_count;  // k; 1 for count-min sketches
    std::uint64_t seed;
    std::uint8_t counter_bits;  // 1 or 32

    friend bool operator==(const CompatibilityWitness&, const CompatibilityWitness&) = default;
};

CompatibilityWitness witness_of(const BloomFilter& b) noexcept;
CompatibilityWitness witness_of(const CountingBloomFilter& c) noexcept;
CompatibilityWitness witness_of(const CountMinSketch& s) noexcept;
CompatibilityWitness witness_of(const Sketch& s) noexcept;

/// Names of the fields that differ: "kind", "width", "depth", "hash_count",
/// "seed", "counter_width". Empty when the witnesses match.
std::vector<std::string> witness_mismatch(const CompatibilityWitness& a,
                                          const CompatibilityWitness& b);

/// Throws IncompatibleSketches listing the differing fields.
void require_compatible(const CompatibilityWitness& a, const CompatibilityWitness& b);

/// 2 * min_sum / (p_sum + q_sum), one floating division. Throws
/// UndefinedSimilarity when the denominator is zero.
double dice_ratio(const kernels::DiceTerms& t);
/// dot / sqrt(|p|^2 * |q|^2) clamped to [0, 1]. Throws UndefinedSimilarity
/// when either norm is zero.
double cosine_ratio(const kernels::CosineTerms& t);

double counter_dice(std::span<const Counter> p, std::span<const Counter> q);
double counter_cosine(std::span<const Counter> p, std::span<const Counter> q);

double cbf_dice(const CountingBloomFilter& p, const CountingBloomFilter& q);
double cbf_cosine(const CountingBloomFilter& p, const CountingBloomFilter& q);

/// Mean over rows of the per-row Dice. Any row with a zero denominator is an
/// error, even if other rows are defined.
double cms_dice(const CountMinSketch& r, const CountMinSketch& s);
/// Mean over rows of the per-row cosine.
double cms_cosine(const CountMinSketch& r, const CountMinSketch& s);

/// Dispatches on the sketch kind. Bloom filters carry no counts and are
/// rejected with std::invalid_argument.
double estimate_similarity(const Sketch& a, const Sketch& b, Metric metric);

}  // namespace simsketch
