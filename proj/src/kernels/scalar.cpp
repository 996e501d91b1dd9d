#include <algorithm>

#include "tables.hpp"

namespace simsketch::kernels::detail {

namespace {

DiceTerms dice_scalar(const std::uint32_t* p, const std::uint32_t* q, std::size_t n) {
    DiceTerms t;
    for (std::size_t i = 0; i < n; ++i) {
        t.min_sum += std::min(p[i], q[i]);
        t.p_sum += p[i];
        t.q_sum += q[i];
    }
    return t;
}

CosineTerms cosine_scalar(const std::uint32_t* p, const std::uint32_t* q, std::size_t n) {
    CosineTerms t;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t a = p[i];
        const std::uint64_t b = q[i];
        t.dot += a * b;
        t.p_norm2 += a * a;
        t.q_norm2 += b * b;
    }
    return t;
}

bool accumulate_scalar(std::uint32_t* dst, const std::uint32_t* src, std::size_t n) {
    bool clamped = false;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t s = dst[i] + src[i];
        if (s < dst[i]) {
            dst[i] = 0xFFFFFFFFU;
            clamped = true;
        } else {
            dst[i] = s;
        }
    }
    return clamped;
}

}  // namespace

const KernelTable kScalarTable{Isa::scalar, dice_scalar, cosine_scalar, accumulate_scalar};

}  // namespace simsketch::kernels::detail
