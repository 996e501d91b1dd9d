// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>

#include "tables.hpp"

namespace simsketch::kernels::detail {

namespace {

// Splits eight u32 lanes into the even and odd lanes zero-extended to u64.
inline __m256i even_lanes(__m256i v) {
    return _mm256_and_si256(v, _mm256_set1_epi64x(0xFFFFFFFFLL));
}

inline __m256i odd_lanes(__m256i v) { return _mm256_srli_epi64(v, 32); }

inline __m256i widen_add(__m256i acc, __m256i v) {
    return _mm256_add_epi64(acc, _mm256_add_epi64(even_lanes(v), odd_lanes(v)));
}

inline std::uint64_t hsum64(__m256i v) {
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
    return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

inline u128 hsum_split(__m256i lo, __m256i hi) {
    alignas(32) std::uint64_t l[4];
    alignas(32) std::uint64_t h[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(l), lo);
    _mm256_store_si256(reinterpret_cast<__m256i*>(h), hi);
    u128 total = 0;
    for (int i = 0; i < 4; ++i) {
        total += u128{l[i]} + (u128{h[i]} << 32);
    }
    return total;
}

// 64-bit products accumulated as separate low and high 32-bit halves, so no
// lane can overflow for vectors shorter than 2^32.
struct SplitAccumulator {
    __m256i lo = _mm256_setzero_si256();
    __m256i hi = _mm256_setzero_si256();

    void add(__m256i products) {
        lo = _mm256_add_epi64(lo, even_lanes(products));
        hi = _mm256_add_epi64(hi, odd_lanes(products));
    }
};

DiceTerms dice_avx2(const std::uint32_t* p, const std::uint32_t* q, std::size_t n) {
    __m256i mins = _mm256_setzero_si256();
    __m256i ps = _mm256_setzero_si256();
    __m256i qs = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
        const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(q + i));
        mins = widen_add(mins, _mm256_min_epu32(a, b));
        ps = widen_add(ps, a);
        qs = widen_add(qs, b);
    }
    DiceTerms t{hsum64(mins), hsum64(ps), hsum64(qs)};
    for (; i < n; ++i) {
        t.min_sum += std::min(p[i], q[i]);
        t.p_sum += p[i];
        t.q_sum += q[i];
    }
    return t;
}

CosineTerms cosine_avx2(const std::uint32_t* p, const std::uint32_t* q, std::size_t n) {
    SplitAccumulator dot;
    SplitAccumulator pp;
    SplitAccumulator qq;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
        const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(q + i));
        const __m256i a_odd = odd_lanes(a);
        const __m256i b_odd = odd_lanes(b);
        // _mm256_mul_epu32 multiplies the low 32 bits of each 64-bit lane.
        dot.add(_mm256_mul_epu32(a, b));
        dot.add(_mm256_mul_epu32(a_odd, b_odd));
        pp.add(_mm256_mul_epu32(a, a));
        pp.add(_mm256_mul_epu32(a_odd, a_odd));
        qq.add(_mm256_mul_epu32(b, b));
        qq.add(_mm256_mul_epu32(b_odd, b_odd));
    }
    CosineTerms t{hsum_split(dot.lo, dot.hi), hsum_split(pp.lo, pp.hi),
                  hsum_split(qq.lo, qq.hi)};
    for (; i < n; ++i) {
        const std::uint64_t a = p[i];
        const std::uint64_t b = q[i];
        t.dot += a * b;
        t.p_norm2 += a * a;
        t.q_norm2 += b * b;
    }
    return t;
}

bool accumulate_avx2(std::uint32_t* dst, const std::uint32_t* src, std::size_t n) {
    __m256i overflow = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        const __m256i sum = _mm256_add_epi32(d, s);
        // Wrapped iff sum < d, i.e. max(sum, d) != sum.
        const __m256i ok = _mm256_cmpeq_epi32(_mm256_max_epu32(sum, d), sum);
        const __m256i wrapped = _mm256_xor_si256(ok, _mm256_set1_epi32(-1));
        overflow = _mm256_or_si256(overflow, wrapped);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_or_si256(sum, wrapped));
    }
    bool clamped = !_mm256_testz_si256(overflow, overflow);
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

const KernelTable kAvx2Table{Isa::avx2, dice_avx2, cosine_avx2, accumulate_avx2};

}  // namespace simsketch::kernels::detail
