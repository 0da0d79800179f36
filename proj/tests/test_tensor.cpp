#include <doctest.h>

#include <cmath>
#include <random>

#include "jointmaze/tensor.hpp"

using namespace jm;

namespace {
std::vector<double> random_weights(std::mt19937_64& g, std::size_t n, bool allow_zero) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = (allow_zero && u(g) < 0.2) ? 0.0 : u(g);
    v[0] += 1e-3;
    return v;
}
}  // namespace

TEST_CASE("normalize examples") {
    CHECK(normalize({2, 2}).probs() == std::vector<double>{0.5, 0.5});
    CHECK(normalize({1, 0, 0, 0}).probs() == std::vector<double>{1, 0, 0, 0});
    const auto p = normalize({1, 3});
    CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK_THROWS_AS(normalize({0, 0, 0}), DegenerateError);
    CHECK_THROWS_AS(normalize({1, -1}), DegenerateError);
}

TEST_CASE("softmax examples") {
    for (double c : {-7.0, 0.0, 3.5}) {
        const auto p = softmax(std::vector<double>(4, c));
        for (std::size_t i = 0; i < 4; ++i) CHECK(p[i] == doctest::Approx(0.25));
    }
    const auto p = softmax(std::vector<double>{0.0, -std::log(4.0)});
    CHECK(p[0] == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(0.2).epsilon(1e-14));
    const auto big = softmax(std::vector<double>{1000.0, 0.0});
    CHECK(std::isfinite(big[0]));
    CHECK(big[0] == doctest::Approx(1.0));
    CHECK(big[1] < 1e-300);
}

TEST_CASE("kl divergence examples") {
    const auto half = Categorical::from_probs({0.5, 0.5});
    CHECK(kl_divergence(half, half) == 0.0);
    CHECK(kl_divergence(Categorical::from_probs({1, 0}), half) == doctest::Approx(std::log(2.0)));
    const double oracle = 0.7 * std::log(0.7 / 0.3) + 0.3 * std::log(0.3 / 0.7);
    CHECK(kl_divergence(Categorical::from_probs({0.7, 0.3}), Categorical::from_probs({0.3, 0.7})) ==
          doctest::Approx(oracle).epsilon(1e-13));
    CHECK(oracle == doctest::Approx(0.338919).epsilon(1e-6));
    CHECK_THROWS_AS(kl_divergence(half, Categorical::uniform(3)), DimensionError);
}

TEST_CASE("kl divergence floors q before the log") {
    const auto p = Categorical::from_probs({0.5, 0.5});
    const auto q = Categorical::from_probs({1.0, 0.0});
    CHECK(kl_divergence(p, q) == doctest::Approx(0.5 * std::log(0.5) + 0.5 * (std::log(0.5) - std::log(1e-12))));
}

TEST_CASE("entropy examples") {
    CHECK(entropy(Categorical::delta(5, 2)) == 0.0);
    CHECK(entropy(Categorical::uniform(4)) == doctest::Approx(std::log(4.0)));
    const double oracle = -(0.8 * std::log(0.8) + 0.2 * std::log(0.2));
    CHECK(entropy(Categorical::from_probs({0.8, 0.2})) == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(oracle == doctest::Approx(0.5004).epsilon(1e-4));
}

TEST_CASE("flatten examples") {
    const FactoredIndex f({21, 21, 4});
    CHECK(f.flat_size() == 1764);
    CHECK(f.flatten(std::vector<std::size_t>{0, 0, 0}) == 0);
    CHECK(f.flatten(std::vector<std::size_t>{20, 20, 3}) == 1763);
    CHECK(FactoredIndex({2, 3}).flatten(std::vector<std::size_t>{1, 2}) == 5);
    CHECK_THROWS_AS(f.flatten(std::vector<std::size_t>{21, 0, 0}), IndexError);
    CHECK_THROWS_AS(f.unflatten(1764), IndexError);
}

TEST_CASE("property: normalize sums to one") {
    std::mt19937_64 g(1);
    for (int k = 0; k < 500; ++k) {
        const auto p = normalize(random_weights(g, 1 + k % 40, true));
        double s = 0;
        for (double x : p.probs()) {
            CHECK(x >= 0.0);
            s += x;
        }
        CHECK(std::abs(s - 1.0) < 1e-9);
    }
}

TEST_CASE("property: Gibbs inequality and identity") {
    std::mt19937_64 g(2);
    for (int k = 0; k < 500; ++k) {
        const std::size_t n = 1 + k % 30;
        const auto p = normalize(random_weights(g, n, true));
        const auto q = normalize(random_weights(g, n, false));
        CHECK(std::abs(kl_divergence(p, p)) < 1e-12);
        CHECK(kl_divergence(p, q) >= 0.0);
    }
}

TEST_CASE("property: softmax shift invariance") {
    std::mt19937_64 g(3);
    std::normal_distribution<double> nd(0.0, 5.0);
    for (int k = 0; k < 300; ++k) {
        std::vector<double> x(1 + k % 25);
        for (auto& v : x) v = nd(g);
        auto y = x;
        const double c = nd(g) * 10;
        for (auto& v : y) v += c;
        const auto a = softmax(x), b = softmax(y);
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
    }
}

TEST_CASE("property: flatten and unflatten are inverse") {
    for (const auto& shape : std::vector<std::vector<std::size_t>>{{21, 21, 4}, {2, 3}, {7}, {3, 1, 5, 2}}) {
        const FactoredIndex f(shape);
        for (std::size_t k = 0; k < f.flat_size(); ++k) {
            const auto idx = f.unflatten(k);
            REQUIRE(f.flatten(idx) == k);
        }
    }
}

TEST_CASE("categorical validation") {
    CHECK_THROWS_AS(Categorical::from_probs({0.5, 0.6}), DegenerateError);
    CHECK_THROWS_AS(Categorical::from_probs({}), DegenerateError);
    CHECK(Categorical::from_probs({0.25, 0.75}).argmax() == 1);
}
