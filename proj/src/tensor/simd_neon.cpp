// AArch64 NEON kernels (two doubles per register). Same reductions and
// polynomials as the AVX2 table.
#include "jointmaze/simd.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

#include <cmath>
#include <cstdint>

namespace jm::simd {
namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kLog2e = 1.44269504088896338700e+00;

inline float64x2_t exp2v(float64x2_t x) {
    const float64x2_t lo_lim = vdupq_n_f64(-708.0);
    const uint64x2_t underflow = vcltq_f64(x, lo_lim);
    x = vminq_f64(vmaxq_f64(x, lo_lim), vdupq_n_f64(709.0));
    const int64x2_t ni = vcvtnq_s64_f64(vmulq_n_f64(x, kLog2e));
    const float64x2_t n = vcvtq_f64_s64(ni);
    float64x2_t r = vfmsq_f64(x, n, vdupq_n_f64(kLn2Hi));
    r = vfmsq_f64(r, n, vdupq_n_f64(kLn2Lo));

    static constexpr double c[] = {
        1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
        1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
        1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        0.5,
        1.0,                1.0};
    float64x2_t p = vdupq_n_f64(c[0]);
    for (int i = 1; i < 14; ++i) p = vfmaq_f64(vdupq_n_f64(c[i]), p, r);

    const int64x2_t e = vshlq_n_s64(vaddq_s64(ni, vdupq_n_s64(1023)), 52);
    const float64x2_t out = vmulq_f64(p, vreinterpretq_f64_s64(e));
    return vbslq_f64(underflow, vdupq_n_f64(0.0), out);
}

inline float64x2_t log2v(float64x2_t x) {
    const uint64x2_t bits = vreinterpretq_u64_f64(x);
    float64x2_t m = vreinterpretq_f64_u64(
        vorrq_u64(vandq_u64(bits, vdupq_n_u64(0x000FFFFFFFFFFFFFULL)),
                  vdupq_n_u64(0x3FF0000000000000ULL)));
    const uint64x2_t eb = vandq_u64(vshrq_n_u64(bits, 52), vdupq_n_u64(0x7FF));
    float64x2_t e = vsubq_f64(vcvtq_f64_u64(eb), vdupq_n_f64(1023.0));

    const uint64x2_t big = vcgtq_f64(m, vdupq_n_f64(1.4142135623730951));
    m = vbslq_f64(big, vmulq_n_f64(m, 0.5), m);
    e = vbslq_f64(big, vaddq_f64(e, vdupq_n_f64(1.0)), e);

    const float64x2_t f = vsubq_f64(m, vdupq_n_f64(1.0));
    const float64x2_t s = vdivq_f64(f, vaddq_f64(f, vdupq_n_f64(2.0)));
    const float64x2_t z = vmulq_f64(s, s);
    float64x2_t p = vdupq_n_f64(1.0 / 23.0);
    for (int k = 10; k >= 1; --k) p = vfmaq_f64(vdupq_n_f64(1.0 / (2 * k + 1)), p, z);
    const float64x2_t s2 = vaddq_f64(s, s);
    float64x2_t lm = vfmaq_f64(s2, vmulq_f64(s2, z), p);
    lm = vfmaq_f64(lm, e, vdupq_n_f64(kLn2Lo));
    const float64x2_t out = vfmaq_f64(lm, e, vdupq_n_f64(kLn2Hi));
    const uint64x2_t zero = vceqq_f64(x, vdupq_n_f64(0.0));
    return vbslq_f64(zero, vdupq_n_f64(-INFINITY), out);
}

double dot(const double* x, const double* y, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0), a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 = vfmaq_f64(a0, vld1q_f64(x + i), vld1q_f64(y + i));
        a1 = vfmaq_f64(a1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double sum(const double* x, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0), a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 = vaddq_f64(a0, vld1q_f64(x + i));
        a1 = vaddq_f64(a1, vld1q_f64(x + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) s += x[i];
    return s;
}

double vmax(const double* x, std::size_t n) {
    float64x2_t m = vdupq_n_f64(-INFINITY);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vld1q_f64(x + i));
    double s = vmaxvq_f64(m);
    for (; i < n; ++i) s = x[i] > s ? x[i] : s;
    return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_n_f64(vld1q_f64(y + i), vld1q_f64(x + i), a));
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmulq_n_f64(vld1q_f64(y + i), a));
    for (; i < n; ++i) y[i] *= a;
}

void add_scalar(double a, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), va));
    for (; i < n; ++i) y[i] += a;
}

void vexp(const double* x, double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, exp2v(vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] = std::exp(x[i]);
}

void log_floor(const double* x, double* y, std::size_t n, double floor) {
    const float64x2_t vf = vdupq_n_f64(floor);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, log2v(vmaxq_f64(vld1q_f64(x + i), vf)));
    for (; i < n; ++i) y[i] = std::log(x[i] > floor ? x[i] : floor);
}

double kl(const double* p, const double* q, std::size_t n, double floor) {
    const float64x2_t vf = vdupq_n_f64(floor), tiny = vdupq_n_f64(1e-300);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t vp = vld1q_f64(p + i);
        const float64x2_t d = vsubq_f64(log2v(vmaxq_f64(vp, tiny)), log2v(vmaxq_f64(vld1q_f64(q + i), vf)));
        const uint64x2_t pos = vcgtq_f64(vp, vdupq_n_f64(0.0));
        acc = vaddq_f64(acc, vbslq_f64(pos, vmulq_f64(vp, d), vdupq_n_f64(0.0)));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i)
        if (p[i] > 0.0) s += p[i] * (std::log(p[i]) - std::log(q[i] > floor ? q[i] : floor));
    return s;
}

double entropy(const double* p, std::size_t n) {
    const float64x2_t tiny = vdupq_n_f64(1e-300);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t vp = vld1q_f64(p + i);
        const uint64x2_t pos = vcgtq_f64(vp, vdupq_n_f64(0.0));
        const float64x2_t t = vmulq_f64(vp, log2v(vmaxq_f64(vp, tiny)));
        acc = vsubq_f64(acc, vbslq_f64(pos, t, vdupq_n_f64(0.0)));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i)
        if (p[i] > 0.0) s -= p[i] * std::log(p[i]);
    return s;
}

constexpr KernelTable kTable{"neon", dot,  sum,       vmax, axpy, scale,
                             add_scalar, vexp, log_floor, kl,   entropy};

}  // namespace

const KernelTable* neon_kernels() { return &kTable; }

}  // namespace jm::simd

#else

namespace jm::simd {
const KernelTable* neon_kernels() { return nullptr; }
}  // namespace jm::simd

#endif
