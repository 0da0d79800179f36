#pragma once
// Dense double kernels used on the 1764-state belief vectors.
// One scalar reference table plus optional AVX2 and NEON tables; the
// active table is chosen once from the CPU at first use.

#include <cstddef>
#include <string_view>
#include <vector>

namespace jm::simd {

struct KernelTable {
    const char* name;
    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    double (*max)(const double* x, std::size_t n);
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    void (*scale)(double a, double* y, std::size_t n);
    void (*add_scalar)(double a, double* y, std::size_t n);
    // y = exp(x)
    void (*exp)(const double* x, double* y, std::size_t n);
    // y = log(max(x, floor))
    void (*log_floor)(const double* x, double* y, std::size_t n, double floor);
    // sum over p > 0 of p * (log p - log max(q, floor))
    double (*kl)(const double* p, const double* q, std::size_t n, double floor);
    // -sum over p > 0 of p log p
    double (*entropy)(const double* p, std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the variant is not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

// The dispatch choice. JOINTMAZE_SIMD=scalar|avx2|neon forces a variant
// when it is available.
const KernelTable& kernels();

}  // namespace jm::simd
