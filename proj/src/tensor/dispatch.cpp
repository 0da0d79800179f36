#include <cstdlib>
#include <string_view>

#include "jointmaze/simd.hpp"

namespace jm::simd {

std::vector<const KernelTable*> available_kernels() {
    std::vector<const KernelTable*> out{&scalar_kernels()};
    if (auto* k = avx2_kernels()) out.push_back(k);
    if (auto* k = neon_kernels()) out.push_back(k);
    return out;
}

namespace {
const KernelTable& choose() {
    const auto all = available_kernels();
    if (const char* env = std::getenv("JOINTMAZE_SIMD")) {
        for (auto* k : all)
            if (std::string_view(env) == k->name) return *k;
    }
    return *all.back();
}
}  // namespace

const KernelTable& kernels() {
    static const KernelTable& chosen = choose();
    return chosen;
}

}  // namespace jm::simd
