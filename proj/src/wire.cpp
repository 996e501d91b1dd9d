#include "simsketch/wire.hpp"

#include <algorithm>
#include <numeric>

namespace simsketch::wire {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[at + i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::span<const std::uint8_t> b, std::size_t at) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[at + i]) << (8 * i);
    return v;
}

void put_counters(std::vector<std::uint8_t>& out, std::span<const Counter> counters) {
    for (Counter c : counters) put_u32(out, c);
}

std::vector<Counter> get_counters(std::span<const std::uint8_t> payload) {
    std::vector<Counter> out(payload.size() / 4);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = get_u32(payload, 4 * i);
    return out;
}

[[noreturn]] void fail(WireErrorKind kind, const std::string& what) {
    throw WireError(kind, what);
}

}  // namespace

const char* to_string(WireErrorKind kind) noexcept {
    switch (kind) {
        case WireErrorKind::bad_magic:
            return "bad_magic";
        case WireErrorKind::unsupported_version:
            return "unsupported_version";
        case WireErrorKind::truncated:
            return "truncated";
        case WireErrorKind::unknown_kind:
            return "unknown_kind";
        case WireErrorKind::inconsistent_header:
            return "inconsistent_header";
        case WireErrorKind::trailing_bytes:
            return "trailing_bytes";
    }
    return "unknown";
}

WireError::WireError(WireErrorKind kind, const std::string& what)
    : Error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

std::size_t EnvelopeHeader::payload_size() const noexcept {
    const std::size_t row = counter_width == CounterWidth::packed_bits
                                ? (static_cast<std::size_t>(width) + 7) / 8
                                : static_cast<std::size_t>(width) * 4;
    return row * depth;
}

EnvelopeHeader header_of(const Sketch& sketch) noexcept {
    EnvelopeHeader h;
    h.kind = kind_of(sketch);
    std::visit(
        [&h](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BloomFilter>) {
                h.width = s.length();
                h.hash_count = s.hash_count();
                h.counter_width = CounterWidth::packed_bits;
            } else if constexpr (std::is_same_v<T, CountingBloomFilter>) {
                h.width = s.length();
                h.hash_count = s.hash_count();
            } else {
                h.width = s.width();
                h.depth = s.depth();
            }
            h.seed = s.seed();
        },
        sketch);
    return h;
}

std::vector<std::uint8_t> encode(const Sketch& sketch) {
    const EnvelopeHeader h = header_of(sketch);
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + h.payload_size());
    for (std::uint8_t b : kMagic) out.push_back(b);
    out.push_back(h.version);
    out.push_back(static_cast<std::uint8_t>(h.kind));
    put_u32(out, h.width);
    put_u32(out, h.depth);
    put_u32(out, h.hash_count);
    put_u64(out, h.seed);
    out.push_back(static_cast<std::uint8_t>(h.counter_width));
    std::visit(
        [&out](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BloomFilter>) {
                const auto bits = s.packed_bits();
                out.insert(out.end(), bits.begin(), bits.end());
            } else if constexpr (std::is_same_v<T, CountingBloomFilter>) {
                put_counters(out, s.counters());
            } else {
                put_counters(out, s.table());
            }
        },
        sketch);
    return out;
}

EnvelopeHeader decode_header(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kMagic.size() || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
        fail(WireErrorKind::bad_magic, "envelope does not start with \"SKSM\"");
    }
    if (bytes.size() < kHeaderSize) {
        fail(WireErrorKind::truncated, "header needs " + std::to_string(kHeaderSize) +
                                           " bytes, got " + std::to_string(bytes.size()));
    }
    EnvelopeHeader h;
    h.version = bytes[4];
    if (h.version != kVersion) {
        fail(WireErrorKind::unsupported_version,
             "version " + std::to_string(h.version) + " (supported: 1)");
    }
    const std::uint8_t kind = bytes[5];
    if (kind > 2) {
        fail(WireErrorKind::unknown_kind, "structure code " + std::to_string(kind));
    }
    h.kind = static_cast<StructureKind>(kind);
    h.width = get_u32(bytes, 6);
    h.depth = get_u32(bytes, 10);
    h.hash_count = get_u32(bytes, 14);
    h.seed = get_u64(bytes, 18);
    const std::uint8_t code = bytes[26];

    if (h.width == 0 || h.depth == 0 || h.hash_count == 0) {
        fail(WireErrorKind::inconsistent_header, "width, depth and hash count must be >= 1");
    }
    switch (h.kind) {
        case StructureKind::bloom_filter:
            if (code != static_cast<std::uint8_t>(CounterWidth::packed_bits)) {
                fail(WireErrorKind::inconsistent_header, "Bloom filter requires counter width 0");
            }
            if (h.depth != 1) {
                fail(WireErrorKind::inconsistent_header, "Bloom filter requires depth 1");
            }
            break;
        case StructureKind::counting_bloom_filter:
            if (code != static_cast<std::uint8_t>(CounterWidth::u32)) {
                fail(WireErrorKind::inconsistent_header, "CBF requires counter width 2");
            }
            if (h.depth != 1) {
                fail(WireErrorKind::inconsistent_header, "CBF requires depth 1");
            }
            break;
        case StructureKind::count_min_sketch:
            if (code != static_cast<std::uint8_t>(CounterWidth::u32)) {
                fail(WireErrorKind::inconsistent_header, "CMS requires counter width 2");
            }
            if (h.hash_count != 1) {
                fail(WireErrorKind::inconsistent_header, "CMS requires hash count 1");
            }
            break;
    }
    h.counter_width = static_cast<CounterWidth>(code);
    return h;
}

Sketch decode(std::span<const std::uint8_t> bytes) {
    const EnvelopeHeader h = decode_header(bytes);
    const std::size_t expected = kHeaderSize + h.payload_size();
    if (bytes.size() < expected) {
        fail(WireErrorKind::truncated, "expected " + std::to_string(expected) +
                                           " bytes, got " + std::to_string(bytes.size()));
    }
    if (bytes.size() > expected) {
        fail(WireErrorKind::trailing_bytes, "expected " + std::to_string(expected) +
                                                " bytes, got " + std::to_string(bytes.size()));
    }
    const auto payload = bytes.subspan(kHeaderSize);
    switch (h.kind) {
        case StructureKind::bloom_filter: {
            const unsigned tail = h.width % 8;
            if (tail != 0 && (payload.back() >> tail) != 0) {
                fail(WireErrorKind::inconsistent_header, "Bloom filter padding bits are set");
            }
            return BloomFilter(HashFamily(h.seed, h.hash_count, h.width),
                               std::vector<std::uint8_t>(payload.begin(), payload.end()));
        }
        case StructureKind::counting_bloom_filter: {
            auto counters = get_counters(payload);
            const std::uint64_t sum =
                std::accumulate(counters.begin(), counters.end(), std::uint64_t{0});
            return CountingBloomFilter(HashFamily(h.seed, h.hash_count, h.width),
                                       std::move(counters), sum / h.hash_count);
        }
        case StructureKind::count_min_sketch: {
            auto table = get_counters(payload);
            const std::uint64_t row0 =
                std::accumulate(table.begin(), table.begin() + h.width, std::uint64_t{0});
            return CountMinSketch(h.width, h.depth, h.seed, std::move(table), row0);
        }
    }
    fail(WireErrorKind::unknown_kind, "unreachable");
}

CompatibilityWitness witness_of(const EnvelopeHeader& h) noexcept {
    return {h.kind, h.width, h.depth, h.hash_count, h.seed,
            static_cast<std::uint8_t>(h.counter_width == CounterWidth::packed_bits ? 1 : 32)};
}

CompatibilityReport compatibility_check(const EnvelopeHeader& a, const EnvelopeHeader& b) {
    CompatibilityReport report;
    const auto wa = witness_of(a);
    report.mismatched_fields = witness_mismatch(wa, witness_of(b));
    if (report.mismatched_fields.empty()) {
        report.witness = wa;
    }
    return report;
}

}  // namespace simsketch::wire
