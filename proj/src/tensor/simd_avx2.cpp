// AVX2 + FMA kernels. This translation unit is built with -mavx2 -mfma and
// only entered after a runtime CPU check.
#include "jointmaze/simd.hpp"

#if defined(__x86_64__) && defined(JM_HAVE_AVX2)
#include <immintrin.h>

#include <cmath>
#include <cstdint>

namespace jm::simd {
namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kLog2e = 1.44269504088896338700e+00;

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// exp via Cody-Waite reduction and a degree-13 Taylor polynomial on
// |r| <= ln2/2 (truncation below 1e-17 relative).
inline __m256d exp4(__m256d x) {
    const __m256d lo_lim = _mm256_set1_pd(-708.0);
    const __m256d underflow = _mm256_cmp_pd(x, lo_lim, _CMP_LT_OQ);
    x = _mm256_min_pd(_mm256_max_pd(x, lo_lim), _mm256_set1_pd(709.0));
    __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kLog2e)),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Hi), x);
    r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Lo), r);

    static constexpr double c[] = {
        1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
        1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
        1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        0.5,
        1.0,                1.0};
    __m256d p = _mm256_set1_pd(c[0]);
    for (int i = 1; i < 14; ++i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(c[i]));

    __m128i ni = _mm256_cvtpd_epi32(n);
    __m256i e = _mm256_add_epi64(_mm256_cvtepi32_epi64(ni), _mm256_set1_epi64x(1023));
    __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(e, 52));
    __m256d out = _mm256_mul_pd(p, scale);
    return _mm256_blendv_pd(out, _mm256_setzero_pd(), underflow);
}

// log for positive normal inputs: x = m 2^e with m in [sqrt(1/2), sqrt(2)),
// log m = 2 atanh(s), s = (m-1)/(m+1), series in s^2 to order 11.
inline __m256d log4(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

    __m256i eb = _mm256_and_si256(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x7FF));
    const __m256d magic = _mm256_set1_pd(4503599627370496.0);
    __m256d e = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(eb, _mm256_castpd_si256(magic))), magic);
    e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));

    const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
    e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

    const __m256d f = _mm256_sub_pd(m, _mm256_set1_pd(1.0));
    const __m256d s = _mm256_div_pd(f, _mm256_add_pd(f, _mm256_set1_pd(2.0)));
    const __m256d z = _mm256_mul_pd(s, s);
    __m256d p = _mm256_set1_pd(1.0 / 23.0);
    for (int k = 10; k >= 1; --k) p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / (2 * k + 1)));
    const __m256d s2 = _mm256_add_pd(s, s);
    __m256d lm = _mm256_fmadd_pd(_mm256_mul_pd(s2, z), p, s2);
    lm = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Lo), lm);
    __m256d out = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Hi), lm);

    const __m256d zero = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_EQ_OQ);
    return _mm256_blendv_pd(out, _mm256_set1_pd(-INFINITY), zero);
}

double dot(const double* x, const double* y, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
        a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
    }
    for (; i + 4 <= n; i += 4)
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    double s = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double sum(const double* x, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
        a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + i + 4));
    }
    for (; i + 4 <= n; i += 4) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
    double s = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) s += x[i];
    return s;
}

double vmax(const double* x, std::size_t n) {
    __m256d m = _mm256_set1_pd(-INFINITY);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_loadu_pd(x + i));
    double s = hmax(m);
    for (; i < n; ++i) s = x[i] > s ? x[i] : s;
    return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, _mm256_mul_pd(va, _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] *= a;
}

void add_scalar(double a, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, _mm256_add_pd(va, _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += a;
}

void vexp(const double* x, double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, exp4(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) y[i] = std::exp(x[i]);
}

void log_floor(const double* x, double* y, std::size_t n, double floor) {
    const __m256d vf = _mm256_set1_pd(floor);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, log4(_mm256_max_pd(_mm256_loadu_pd(x + i), vf)));
    for (; i < n; ++i) y[i] = std::log(x[i] > floor ? x[i] : floor);
}

double kl(const double* p, const double* q, std::size_t n, double floor) {
    const __m256d vf = _mm256_set1_pd(floor);
    const __m256d tiny = _mm256_set1_pd(1e-300);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vp = _mm256_loadu_pd(p + i);
        const __m256d lp = log4(_mm256_max_pd(vp, tiny));
        const __m256d lq = log4(_mm256_max_pd(_mm256_loadu_pd(q + i), vf));
        const __m256d pos = _mm256_cmp_pd(vp, _mm256_setzero_pd(), _CMP_GT_OQ);
        acc = _mm256_add_pd(acc, _mm256_and_pd(pos, _mm256_mul_pd(vp, _mm256_sub_pd(lp, lq))));
    }
    double s = hsum(acc);
    for (; i < n; ++i)
        if (p[i] > 0.0) s += p[i] * (std::log(p[i]) - std::log(q[i] > floor ? q[i] : floor));
    return s;
}

double entropy(const double* p, std::size_t n) {
    const __m256d tiny = _mm256_set1_pd(1e-300);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vp = _mm256_loadu_pd(p + i);
        const __m256d pos = _mm256_cmp_pd(vp, _mm256_setzero_pd(), _CMP_GT_OQ);
        const __m256d t = _mm256_mul_pd(vp, log4(_mm256_max_pd(vp, tiny)));
        acc = _mm256_sub_pd(acc, _mm256_and_pd(pos, t));
    }
    double s = hsum(acc);
    for (; i < n; ++i)
        if (p[i] > 0.0) s -= p[i] * std::log(p[i]);
    return s;
}

constexpr KernelTable kTable{"avx2", dot,  sum,       vmax, axpy, scale,
                             add_scalar, vexp, log_floor, kl,   entropy};

}  // namespace

const KernelTable* avx2_kernels() {
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok ? &kTable : nullptr;
}

}  // namespace jm::simd

#else

namespace jm::simd {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace jm::simd

#endif
