#include <algorithm>
#include <cmath>
#include <string>

#include "jointmaze/simd.hpp"
#include "jointmaze/tensor.hpp"

namespace jm {

Categorical Categorical::from_probs(std::vector<double> probs) {
    if (probs.empty()) throw DegenerateError("empty categorical");
    double s = 0.0;
    for (double x : probs) {
        if (!(x >= 0.0)) throw DegenerateError("negative or NaN probability");
        s += x;
    }
    if (std::abs(s - 1.0) > 1e-9) throw DegenerateError("probabilities sum to " + std::to_string(s));
    return Categorical(std::move(probs));
}

Categorical Categorical::uniform(std::size_t n) {
    return Categorical(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Categorical Categorical::delta(std::size_t n, std::size_t at) {
    if (at >= n) throw IndexError("delta index out of range");
    std::vector<double> p(n, 0.0);
    p[at] = 1.0;
    return Categorical(std::move(p));
}

std::size_t Categorical::argmax() const {
    return static_cast<std::size_t>(std::max_element(p_.begin(), p_.end()) - p_.begin());
}

double Categorical::max() const { return *std::max_element(p_.begin(), p_.end()); }

Categorical normalize(std::vector<double> v) {
    for (double x : v)
        if (!(x >= 0.0)) throw DegenerateError("normalize: negative or NaN entry");
    const auto& k = simd::kernels();
    const double s = k.sum(v.data(), v.size());
    if (!(s > 0.0)) throw DegenerateError("normalize: all-zero vector");
    k.scale(1.0 / s, v.data(), v.size());
    return Categorical(std::move(v));
}

Categorical softmax(std::span<const double> x) {
    const auto& k = simd::kernels();
    std::vector<double> y(x.begin(), x.end());
    k.add_scalar(-k.max(y.data(), y.size()), y.data(), y.size());
    k.exp(y.data(), y.data(), y.size());
    return normalize(std::move(y));
}

double kl_divergence(const Categorical& p, const Categorical& q) {
    if (p.size() != q.size()) throw DimensionError("kl_divergence: support mismatch");
    return std::max(0.0, simd::kernels().kl(p.data(), q.data(), p.size(), kLogFloor));
}

double entropy(const Categorical& p) {
    return std::max(0.0, simd::kernels().entropy(p.data(), p.size()));
}

FactoredIndex::FactoredIndex(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    for (auto s : sizes_) {
        if (s == 0) throw DimensionError("factor size must be positive");
        flat_ *= s;
    }
}

std::size_t FactoredIndex::flatten(std::span<const std::size_t> idx) const {
    if (idx.size() != sizes_.size()) throw DimensionError("flatten: wrong number of indices");
    std::size_t k = 0;
    for (std::size_t f = 0; f < sizes_.size(); ++f) {
        if (idx[f] >= sizes_[f]) throw IndexError("flatten: index out of range");
        k = k * sizes_[f] + idx[f];
    }
    return k;
}

std::vector<std::size_t> FactoredIndex::unflatten(std::size_t k) const {
    if (k >= flat_) throw IndexError("unflatten: flat index out of range");
    std::vector<std::size_t> idx(sizes_.size());
    for (std::size_t f = sizes_.size(); f-- > 0;) {
        idx[f] = k % sizes_[f];
        k /= sizes_[f];
    }
    return idx;
}

}  // namespace jm

namespace jm {

void Transition::apply(const double* in, double* out) const {
    const std::size_t n = size();
    std::fill(out, out + n, 0.0);
    if (deterministic()) {
        for (std::size_t s = 0; s < n; ++s)
            if (in[s] != 0.0) out[next[s]] += in[s];
        return;
    }
    const auto& k = simd::kernels();
    for (std::size_t r = 0; r < dense.rows; ++r) out[r] = k.dot(dense.row(r), in, n);
}

}  // namespace jm
