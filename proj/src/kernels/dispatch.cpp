#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "tables.hpp"

namespace simsketch::kernels {

namespace {

bool cpu_supports(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(SIMSKETCH_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::neon:
#if defined(SIMSKETCH_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable* table_for(Isa isa) noexcept {
    if (!cpu_supports(isa)) {
        return nullptr;
    }
    switch (isa) {
        case Isa::scalar:
            return &detail::kScalarTable;
#if defined(SIMSKETCH_HAVE_AVX2)
        case Isa::avx2:
            return &detail::kAvx2Table;
#endif
#if defined(SIMSKETCH_HAVE_NEON)
        case Isa::neon:
            return &detail::kNeonTable;
#endif
        default:
            return nullptr;
    }
}

const KernelTable* initial_table() {
    if (const char* env = std::getenv("SIMSKETCH_KERNELS")) {
        const std::string want(env);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (want == to_string(isa)) {
                if (const KernelTable* t = table_for(isa)) {
                    return t;
                }
            }
        }
    }
    const auto all = available_kernels();
    return all.back();
}

std::atomic<const KernelTable*>& active_slot() {
    static std::atomic<const KernelTable*> slot{initial_table()};
    return slot;
}

void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) {
        throw std::invalid_argument("counter vectors must have equal length");
    }
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar:
            return "scalar";
        case Isa::avx2:
            return "avx2";
        case Isa::neon:
            return "neon";
    }
    return "unknown";
}

const KernelTable& scalar_kernels() noexcept { return detail::kScalarTable; }

std::vector<const KernelTable*> available_kernels() {
    std::vector<const KernelTable*> out;
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
        if (const KernelTable* t = table_for(isa)) {
            out.push_back(t);
        }
    }
    return out;
}

const KernelTable& active_kernels() { return *active_slot().load(std::memory_order_acquire); }

void select_kernels(Isa isa) {
    const KernelTable* t = table_for(isa);
    if (t == nullptr) {
        throw std::invalid_argument("kernel set '" + std::string(to_string(isa)) +
                                    "' is not available on this CPU");
    }
    active_slot().store(t, std::memory_order_release);
}

DiceTerms dice_terms(std::span<const std::uint32_t> p, std::span<const std::uint32_t> q) {
    require_same_size(p.size(), q.size());
    return active_kernels().dice_terms(p.data(), q.data(), p.size());
}

CosineTerms cosine_terms(std::span<const std::uint32_t> p, std::span<const std::uint32_t> q) {
    require_same_size(p.size(), q.size());
    return active_kernels().cosine_terms(p.data(), q.data(), p.size());
}

bool saturating_accumulate(std::span<std::uint32_t> dst, std::span<const std::uint32_t> src) {
    require_same_size(dst.size(), src.size());
    return active_kernels().saturating_accumulate(dst.data(), src.data(), dst.size());
}

}  // namespace simsketch::kernels
