#include <atomic>
#include <cstdlib>
#include <string_view>

#include "dlfm/simd/kernels.hpp"

namespace dlfm::simd {
namespace {

const KernelTable* initial_selection() {
    const char* env = std::getenv("DLFM_SIMD");
    const std::string_view want = env ? env : "auto";
    if (want == "scalar") return &scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return t;
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() {
    static std::atomic<const KernelTable*> current{initial_selection()};
    return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

bool select(Isa isa) {
    const KernelTable* t = isa == Isa::Scalar ? &scalar_kernels() : avx2_kernels();
    if (!t) return false;
    slot().store(t, std::memory_order_release);
    return true;
}

}  // namespace dlfm::simd
