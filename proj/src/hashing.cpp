#include "simsketch/hashing.hpp"

#include <stdexcept>

namespace simsketch {

namespace {

constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x00000100000001B3ULL;

constexpr std::uint64_t fnv_step(std::uint64_t h, std::uint8_t byte) noexcept {
    return (h ^ byte) * kFnvPrime;
}

constexpr std::uint64_t fnv_le64(std::uint64_t h, std::uint64_t v) noexcept {
    for (int i = 0; i < 8; ++i) {
        h = fnv_step(h, static_cast<std::uint8_t>(v >> (8 * i)));
    }
    return h;
}

}  // namespace

std::uint64_t seeded_fnv1a64(std::uint64_t seed, std::string_view bytes) noexcept {
    std::uint64_t h = fnv_le64(kFnvOffset, seed);
    for (char c : bytes) {
        h = fnv_step(h, static_cast<std::uint8_t>(c));
    }
    return h;
}

std::uint64_t element_digest(std::uint64_t seed, std::string_view element) noexcept {
    std::uint64_t x = seeded_fnv1a64(seed, element);
    x ^= x >> 33;
    x *= 0xFF51AFD7ED558CCDULL;
    x ^= x >> 33;
    x *= 0xC4CEB9FE1A85EC53ULL;
    x ^= x >> 33;
    return x;
}

std::uint64_t derive_row_seed(std::uint64_t base, std::uint32_t row) noexcept {
    if (row == 0) {
        return base;
    }
    std::uint64_t h = fnv_le64(kFnvOffset, base);
    for (int i = 0; i < 4; ++i) {
        h = fnv_step(h, static_cast<std::uint8_t>(row >> (8 * i)));
    }
    return h;
}

HashFamily::HashFamily(std::uint64_t seed, std::uint32_t k, std::uint32_t range)
    : seed_(seed), k_(k), range_(range) {
    if (k == 0) {
        throw std::invalid_argument("hash family needs at least one function");
    }
    if (range == 0) {
        throw std::invalid_argument("hash family range must be at least 1");
    }
}

void HashFamily::positions(std::string_view element, std::span<std::uint32_t> out) const {
    if (out.size() != k_) {
        throw std::invalid_argument("position buffer size must equal k");
    }
    const std::uint64_t h1 = element_digest(seed_, element);
    if (k_ == 1) {
        out[0] = static_cast<std::uint32_t>(h1 % range_);
        return;
    }
    const std::uint64_t h2 = element_digest(seed_ ^ kSecondDigestTweak, element) | 1U;
    std::uint64_t h = h1;
    for (std::uint32_t i = 0; i < k_; ++i) {
        out[i] = static_cast<std::uint32_t>(h % range_);
        h += h2;
    }
}

std::vector<std::uint32_t> HashFamily::positions(std::string_view element) const {
    std::vector<std::uint32_t> out(k_);
    positions(element, out);
    return out;
}

std::uint32_t HashFamily::first_position(std::string_view element) const noexcept {
    return static_cast<std::uint32_t>(element_digest(seed_, element) % range_);
}

}  // namespace simsketch
