#include "jointmaze/simd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jm::simd {
namespace {

double dot(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double sum(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double vmax(const double* x, std::size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, x[i]);
    return m;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] *= a;
}

void add_scalar(double a, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a;
}

void vexp(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = std::exp(x[i]);
}

void log_floor(const double* x, double* y, std::size_t n, double floor) {
    for (std::size_t i = 0; i < n; ++i) y[i] = std::log(std::max(x[i], floor));
}

double kl(const double* p, const double* q, std::size_t n, double floor) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (p[i] > 0.0) s += p[i] * (std::log(p[i]) - std::log(std::max(q[i], floor)));
    return s;
}

double entropy(const double* p, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (p[i] > 0.0) s -= p[i] * std::log(p[i]);
    return s;
}

constexpr KernelTable kTable{"scalar", dot,  sum,       vmax, axpy, scale,
                             add_scalar, vexp, log_floor, kl,   entropy};

}  // namespace

const KernelTable& scalar_kernels() { return kTable; }

}  // namespace jm::simd
