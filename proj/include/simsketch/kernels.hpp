#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace simsketch::kernels {

using u128 = unsigned __int128;

/// Integer terms of the Dice ratio of two counter vectors.
struct DiceTerms {
    std::uint64_t min_sum = 0;  // sum_i min(p_i, q_i)
    std::uint64_t p_sum = 0;
    std::uint64_t q_sum = 0;

    friend bool operator==(const DiceTerms&, const DiceTerms&) = default;
};

/// Integer terms of the cosine of two counter vectors. Products of 32-bit
/// counters can reach 2^64, so the sums are kept in 128 bits.
struct CosineTerms {
    u128 dot = 0;
    u128 p_norm2 = 0;
    u128 q_norm2 = 0;

    friend bool operator==(const CosineTerms&, const CosineTerms&) = default;
};

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa) noexcept;

/// One implementation of every counter kernel. All entries of a table
/// produce bit-identical results for the same inputs; vectors hold fewer
/// than 2^32 elements.
struct KernelTable {
    Isa isa;
    DiceTerms (*dice_terms)(const std::uint32_t* p, const std::uint32_t* q, std::size_t n);
    CosineTerms (*cosine_terms)(const std::uint32_t* p, const std::uint32_t* q, std::size_t n);
    /// dst[i] = min(dst[i] + src[i], 2^32 - 1); returns true if any lane clamped.
    bool (*saturating_accumulate)(std::uint32_t* dst, const std::uint32_t* src, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

/// Tables compiled in and supported by the running CPU, scalar first.
std::vector<const KernelTable*> available_kernels();

/// Table used by the span overloads below. Picks the widest supported ISA
/// on first use unless SIMSKETCH_KERNELS=scalar|avx2|neon says otherwise.
const KernelTable& active_kernels();

/// Forces a table; throws std::invalid_argument if `isa` is unavailable.
void select_kernels(Isa isa);

/// Inputs must have equal sizes (std::invalid_argument otherwise).
DiceTerms dice_terms(std::span<const std::uint32_t> p, std::span<const std::uint32_t> q);
CosineTerms cosine_terms(std::span<const std::uint32_t> p, std::span<const std::uint32_t> q);
bool saturating_accumulate(std::span<std::uint32_t> dst, std::span<const std::uint32_t> src);

}  // namespace simsketch::kernels
