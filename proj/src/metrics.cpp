#include "simsketch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "simsketch/errors.hpp"

namespace simsketch {

using kernels::u128;

const char* to_string(Metric metric) noexcept {
    return metric == Metric::dice ? "dice" : "cosine";
}

CompatibilityWitness witness_of(const BloomFilter& b) noexcept {
    return {StructureKind::bloom_filter, b.length(), 1, b.hash_count(), b.seed(), 1};
}

CompatibilityWitness witness_of(const CountingBloomFilter& c) noexcept {
    return {StructureKind::counting_bloom_filter,
            c.length(),
            c.projection_depth(),
            c.hash_count(),
            c.seed(),
            32};
}

CompatibilityWitness witness_of(const CountMinSketch& s) noexcept {
    return {StructureKind::count_min_sketch, s.width(), s.depth(), 1, s.seed(), 32};
}

CompatibilityWitness witness_of(const Sketch& s) noexcept {
    return std::visit([](const auto& v) { return witness_of(v); }, s);
}

std::vector<std::string> witness_mismatch(const CompatibilityWitness& a,
                                          const CompatibilityWitness& b) {
    std::vector<std::string> out;
    if (a.kind != b.kind) out.emplace_back("kind");
    if (a.width != b.width) out.emplace_back("width");
    if (a.depth != b.depth) out.emplace_back("depth");
    if (a.hash_count != b.hash_count) out.emplace_back("hash_count");
    if (a.seed != b.seed) out.emplace_back("seed");
    if (a.counter_bits != b.counter_bits) out.emplace_back("counter_width");
    return out;
}

void require_compatible(const CompatibilityWitness& a, const CompatibilityWitness& b) {
    auto fields = witness_mismatch(a, b);
    if (!fields.empty()) {
        throw IncompatibleSketches(std::move(fields));
    }
}

double dice_ratio(const kernels::DiceTerms& t) {
    const u128 denom = u128{t.p_sum} + t.q_sum;
    if (denom == 0) {
        throw UndefinedSimilarity("dice of two all-zero counter vectors is undefined");
    }
    return static_cast<double>(u128{t.min_sum} * 2) / static_cast<double>(denom);
}

double cosine_ratio(const kernels::CosineTerms& t) {
    if (t.p_norm2 == 0 || t.q_norm2 == 0) {
        throw UndefinedSimilarity("cosine with an all-zero counter vector is undefined");
    }
    const double denom =
        std::sqrt(static_cast<double>(t.p_norm2) * static_cast<double>(t.q_norm2));
    return std::min(1.0, static_cast<double>(t.dot) / denom);
}

double counter_dice(std::span<const Counter> p, std::span<const Counter> q) {
    return dice_ratio(kernels::dice_terms(p, q));
}

double counter_cosine(std::span<const Counter> p, std::span<const Counter> q) {
    return cosine_ratio(kernels::cosine_terms(p, q));
}

double cbf_dice(const CountingBloomFilter& p, const CountingBloomFilter& q) {
    require_compatible(witness_of(p), witness_of(q));
    return counter_dice(p.counters(), q.counters());
}

double cbf_cosine(const CountingBloomFilter& p, const CountingBloomFilter& q) {
    require_compatible(witness_of(p), witness_of(q));
    return counter_cosine(p.counters(), q.counters());
}

namespace {

template <typename RowMetric>
double row_average(const CountMinSketch& r, const CountMinSketch& s, RowMetric metric) {
    require_compatible(witness_of(r), witness_of(s));
    double sum = 0.0;
    for (std::uint32_t i = 0; i < r.depth(); ++i) {
        sum += metric(r.row(i), s.row(i));
    }
    return sum / static_cast<double>(r.depth());
}

}  // namespace

double cms_dice(const CountMinSketch& r, const CountMinSketch& s) {
    return row_average(r, s, counter_dice);
}

double cms_cosine(const CountMinSketch& r, const CountMinSketch& s) {
    return row_average(r, s, counter_cosine);
}

double estimate_similarity(const Sketch& a, const Sketch& b, Metric metric) {
    require_compatible(witness_of(a), witness_of(b));
    if (const auto* p = std::get_if<CountingBloomFilter>(&a)) {
        const auto& q = std::get<CountingBloomFilter>(b);
        return metric == Metric::dice ? cbf_dice(*p, q) : cbf_cosine(*p, q);
    }
    if (const auto* r = std::get_if<CountMinSketch>(&a)) {
        const auto& s = std::get<CountMinSketch>(b);
        return metric == Metric::dice ? cms_dice(*r, s) : cms_cosine(*r, s);
    }
    throw std::invalid_argument("Bloom filters carry no counts; use a CBF or CMS");
}

}  // namespace simsketch
