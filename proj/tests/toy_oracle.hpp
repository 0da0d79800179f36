#pragma once
// Small dense model with a brute-force oracle for state updates and
// expected free energy.

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "jointmaze/engine.hpp"

namespace toy {

using namespace jm;

constexpr std::size_t kS = 8;

struct Toy {
    Matrix A1, A2;  // 3 x 8 and 2 x 8
    std::vector<Transition> B;  // 2 dense actions
    Categorical D, C1, C2;
    std::array<std::array<int, 2>, 2> policies{{{0, 1}, {1, 1}}};
};

inline Categorical random_cat(std::mt19937_64& g, std::size_t n, double lo = 0.01) {
    std::uniform_real_distribution<double> u(lo, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(g);
    return normalize(v);
}

inline Matrix random_columns(std::mt19937_64& g, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t c = 0; c < cols; ++c) {
        const auto col = random_cat(g, rows);
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = col[r];
    }
    return m;
}

inline Toy make_toy(std::uint64_t seed, bool deterministic_a = false) {
    std::mt19937_64 g(seed);
    Toy t;
    t.A1 = random_columns(g, 3, kS);
    t.A2 = random_columns(g, 2, kS);
    if (deterministic_a) {
        t.A1 = Matrix(3, kS);
        t.A2 = Matrix(2, kS);
        for (std::size_t s = 0; s < kS; ++s) {
            t.A1(s % 3, s) = 1.0;
            t.A2(s / 4, s) = 1.0;
        }
    }
    for (int a = 0; a < 2; ++a) {
        Transition tr;
        tr.dense = random_columns(g, kS, kS);
        t.B.push_back(tr);
    }
    t.D = random_cat(g, kS);
    t.C1 = random_cat(g, 3);
    t.C2 = random_cat(g, 2);
    return t;
}

// Exact Bayes by explicit summation over the previous state.
inline std::vector<double> bayes_oracle(const Toy& t, int action, int o1, int o2) {
    std::vector<double> post(kS, 0.0);
    double z = 0;
    for (std::size_t s1 = 0; s1 < kS; ++s1) {
        double prior = 0;
        for (std::size_t s0 = 0; s0 < kS; ++s0) prior += t.D[s0] * t.B[action].dense(s1, s0);
        post[s1] = t.A1(o1, s1) * t.A2(o2, s1) * prior;
        z += post[s1];
    }
    for (auto& p : post) p /= z;
    return post;
}

// Expected free energy by enumerating every state path s0 -> s1 -> s2.
inline double efe_oracle(const Toy& t, const std::array<int, 2>& pol, bool ambiguity) {
    double G = 0;
    for (int tau = 1; tau <= 2; ++tau) {
        std::vector<double> qo1(3, 0.0), qo2(2, 0.0);
        double amb = 0;
        for (std::size_t s0 = 0; s0 < kS; ++s0)
            for (std::size_t s1 = 0; s1 < kS; ++s1)
                for (std::size_t s2 = 0; s2 < kS; ++s2) {
                    const double p = t.D[s0] * t.B[pol[0]].dense(s1, s0) * t.B[pol[1]].dense(s2, s1);
                    const std::size_t s = tau == 1 ? s1 : s2;
                    for (int o = 0; o < 3; ++o) {
                        qo1[o] += p * t.A1(o, s);
                        if (t.A1(o, s) > 0) amb -= p * t.A1(o, s) * std::log(t.A1(o, s));
                    }
                    for (int o = 0; o < 2; ++o) {
                        qo2[o] += p * t.A2(o, s);
                        if (t.A2(o, s) > 0) amb -= p * t.A2(o, s) * std::log(t.A2(o, s));
                    }
                }
        for (int o = 0; o < 3; ++o) G += qo1[o] * std::log(qo1[o] / t.C1[o]);
        for (int o = 0; o < 2; ++o) G += qo2[o] * std::log(qo2[o] / t.C2[o]);
        if (ambiguity) G += amb;
    }
    return G;
}

inline double engine_efe(const Toy& t, const std::array<int, 2>& pol, bool ambiguity) {
    const auto pred = rollout(t.B, t.D, std::vector<int>{pol[0], pol[1]});
    const EfeTerm terms[] = {{&t.A1, &t.C1, {}, 0, ambiguity}, {&t.A2, &t.C2, {}, 0, ambiguity}};
    const std::vector<Categorical>* src[] = {&pred};
    return expected_free_energy(terms, src).total();
}


// Largest deviation between engine and oracle over a batch of random toys.
inline double max_oracle_error(int seeds) {
    double worst = 0;
    for (int seed = 1; seed <= seeds; ++seed) {
        const auto t = make_toy(seed);
        for (int a = 0; a < 2; ++a)
            for (int o1 = 0; o1 < 3; ++o1)
                for (int o2 = 0; o2 < 2; ++o2) {
                    const Matrix* A[] = {&t.A1, &t.A2};
                    const int obs[] = {o1, o2};
                    const auto post = update_state_beliefs(A, obs, predict(t.B[a], t.D));
                    const auto want = bayes_oracle(t, a, o1, o2);
                    for (std::size_t s = 0; s < kS; ++s) worst = std::max(worst, std::abs(post[s] - want[s]));
                }
        for (const auto& pol : t.policies)
            for (bool amb : {true, false})
                worst = std::max(worst, std::abs(engine_efe(t, pol, amb) - efe_oracle(t, pol, amb)));
    }
    return worst;
}

}  // namespace toy
