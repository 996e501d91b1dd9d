#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simsketch/errors.hpp"
#include "simsketch/metrics.hpp"
#include "simsketch/sketches.hpp"

namespace simsketch::wire {

inline constexpr std::array<std::uint8_t, 4> kMagic{'S', 'K', 'S', 'M'};
inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 27;

enum class CounterWidth : std::uint8_t { packed_bits = 0, u32 = 2 };

/// Fixed 27-byte envelope header; all integers little-endian.
///
///   0  magic "SKSM"      4  version        5  kind
///   6  width (u32)      10  depth (u32)   14  hash count (u32)
///  18  seed (u64)       26  counter width code
struct EnvelopeHeader {
    std::uint8_t version = kVersion;
    StructureKind kind = StructureKind::counting_bloom_filter;
    std::uint32_t width = 0;
    std::uint32_t depth = 1;
    std::uint32_t hash_count = 1;
    std::uint64_t seed = 0;
    CounterWidth counter_width = CounterWidth::u32;

    /// Payload bytes implied by the header.
    std::size_t payload_size() const noexcept;

    friend bool operator==(const EnvelopeHeader&, const EnvelopeHeader&) = default;
};

enum class WireErrorKind {
    bad_magic,
    unsupported_version,
    truncated,
    unknown_kind,
    inconsistent_header,
    trailing_bytes,
};

const char* to_string(WireErrorKind kind) noexcept;

class WireError : public Error {
public:
    WireError(WireErrorKind kind, const std::string& what);

    WireErrorKind kind() const noexcept { return kind_; }

private:
    WireErrorKind kind_;
};

EnvelopeHeader header_of(const Sketch& sketch) noexcept;

std::vector<std::uint8_t> encode(const Sketch& sketch);

/// Parses and validates the header only.
EnvelopeHeader decode_header(std::span<const std::uint8_t> bytes);

/// Parses a full envelope. Total insertions are recovered from the counters
/// (row 0 sum for a CMS, counter sum / k for a CBF), which is exact for
/// unsaturated sketches.
Sketch decode(std::span<const std::uint8_t> bytes);

CompatibilityWitness witness_of(const EnvelopeHeader& header) noexcept;

struct CompatibilityReport {
    std::optional<CompatibilityWitness> witness;
    std::vector<std::string> mismatched_fields;

    bool compatible() const noexcept { return witness.has_value(); }
};

CompatibilityReport compatibility_check(const EnvelopeHeader& a, const EnvelopeHeader& b);

}  // namespace simsketch::wire
