#pragma once
// Categorical distributions and row-major factored indices.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace jm {

inline constexpr double kLogFloor = 1e-12;

struct DegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Probability vector over a finite support; entries are non-negative and
// sum to one. Construct through normalize/softmax or from_probs.
class Categorical {
public:
    Categorical() = default;
    // Validates the invariants (tolerance 1e-9).
    static Categorical from_probs(std::vector<double> probs);
    static Categorical uniform(std::size_t n);
    static Categorical delta(std::size_t n, std::size_t at);

    std::size_t size() const { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    const std::vector<double>& probs() const { return p_; }
    const double* data() const { return p_.data(); }
    std::size_t argmax() const;
    double max() const;

private:
    explicit Categorical(std::vector<double> p) : p_(std::move(p)) {}
    friend Categorical normalize(std::vector<double> v);
    std::vector<double> p_;
};

Categorical normalize(std::vector<double> v);
Categorical softmax(std::span<const double> x);
double kl_divergence(const Categorical& p, const Categorical& q);
double entropy(const Categorical& p);

class FactoredIndex {
public:
    explicit FactoredIndex(std::vector<std::size_t> sizes);
    std::size_t flat_size() const { return flat_; }
    const std::vector<std::size_t>& sizes() const { return sizes_; }
    std::size_t flatten(std::span<const std::size_t> idx) const;
    std::vector<std::size_t> unflatten(std::size_t k) const;

private:
    std::vector<std::size_t> sizes_;
    std::size_t flat_ = 1;
};

}  // namespace jm

namespace jm {

// Dense row-major matrix. Likelihoods are stored observation x state so a
// row is the likelihood vector of one observation over all states.
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }
};

// A transition over flat states: either a deterministic successor map or a
// dense column-stochastic matrix (next x current).
struct Transition {
    std::vector<std::size_t> next;
    Matrix dense;

    bool deterministic() const { return !next.empty(); }
    std::size_t size() const { return deterministic() ? next.size() : dense.cols; }
    // out = B * in
    void apply(const double* in, double* out) const;
};

}  // namespace jm
