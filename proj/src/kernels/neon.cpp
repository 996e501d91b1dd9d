// AArch64 Advanced SIMD variants; NEON is architecturally guaranteed there.

#include <arm_neon.h>

#include <algorithm>

#include "tables.hpp"

namespace simsketch::kernels::detail {

namespace {

inline u128 split_total(uint64x2_t lo, uint64x2_t hi) {
    return u128{vgetq_lane_u64(lo, 0)} + vgetq_lane_u64(lo, 1) +
           (u128{vgetq_lane_u64(hi, 0)} << 32) + (u128{vgetq_lane_u64(hi, 1)} << 32);
}

struct SplitAccumulator {
    uint64x2_t lo = vdupq_n_u64(0);
    uint64x2_t hi = vdupq_n_u64(0);

    void add(uint64x2_t products) {
        lo = vaddq_u64(lo, vandq_u64(products, vdupq_n_u64(0xFFFFFFFFULL)));
        hi = vaddq_u64(hi, vshrq_n_u64(products, 32));
    }

    void add_products(uint32x4_t a, uint32x4_t b) {
        add(vmull_u32(vget_low_u32(a), vget_low_u32(b)));
        add(vmull_u32(vget_high_u32(a), vget_high_u32(b)));
    }
};

DiceTerms dice_neon(const std::uint32_t* p, const std::uint32_t* q, std::size_t n) {
    uint64x2_t mins = vdupq_n_u64(0);
    uint64x2_t ps = vdupq_n_u64(0);
    uint64x2_t qs = vdupq_n_u64(0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const uint32x4_t a = vld1q_u32(p + i);
        const uint32x4_t b = vld1q_u32(q + i);
        mins = vpadalq_u32(mins, vminq_u32(a, b));
        ps = vpadalq_u32(ps, a);
        qs = vpadalq_u32(qs, b);
    }
    DiceTerms t{vaddvq_u64(mins), vaddvq_u64(ps), vaddvq_u64(qs)};
    for (; i < n; ++i) {
        t.min_sum += std::min(p[i], q[i]);
        t.p_sum += p[i];
        t.q_sum += q[i];
    }
    return t;
}

CosineTerms cosine_neon(const std::uint32_t* p, const std::uint32_t* q, std::size_t n) {
    SplitAccumulator dot;
    SplitAccumulator pp;
    SplitAccumulator qq;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const uint32x4_t a = vld1q_u32(p + i);
        const uint32x4_t b = vld1q_u32(q + i);
        dot.add_products(a, b);
        pp.add_products(a, a);
        qq.add_products(b, b);
    }
    CosineTerms t{split_total(dot.lo, dot.hi), split_total(pp.lo, pp.hi),
                  split_total(qq.lo, qq.hi)};
    for (; i < n; ++i) {
        const std::uint64_t a = p[i];
        const std::uint64_t b = q[i];
        t.dot += a * b;
        t.p_norm2 += a * a;
        t.q_norm2 += b * b;
    }
    return t;
}

bool accumulate_neon(std::uint32_t* dst, const std::uint32_t* src, std::size_t n) {
    uint32x4_t wrapped_any = vdupq_n_u32(0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const uint32x4_t d = vld1q_u32(dst + i);
        const uint32x4_t s = vld1q_u32(src + i);
        wrapped_any = vorrq_u32(wrapped_any, vcltq_u32(vaddq_u32(d, s), d));
        vst1q_u32(dst + i, vqaddq_u32(d, s));
    }
    bool clamped = vmaxvq_u32(wrapped_any) != 0;
    for (; i < n; ++i) {
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

const KernelTable kNeonTable{Isa::neon, dice_neon, cosine_neon, accumulate_neon};

}  // namespace simsketch::kernels::detail
