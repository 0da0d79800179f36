#include "jointmaze/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jointmaze/simd.hpp"

namespace jm {

Categorical update_state_beliefs(std::span<const Matrix* const> A, std::span<const int> obs,
                                 const Categorical& prior, std::span<const double> extra_log) {
    const auto& k = simd::kernels();
    const std::size_t n = prior.size();
    std::vector<double> acc(n), tmp(n);
    k.log_floor(prior.data(), acc.data(), n, kLogFloor);
    for (std::size_t m = 0; m < A.size() && m < obs.size(); ++m) {
        if (obs[m] < 0) continue;
        if (A[m]->cols != n || static_cast<std::size_t>(obs[m]) >= A[m]->rows)
            throw DimensionError("update_state_beliefs: observation outside likelihood");
        k.log_floor(A[m]->row(obs[m]), tmp.data(), n, kLogFloor);
        k.axpy(1.0, tmp.data(), acc.data(), n);
    }
    if (!extra_log.empty()) {
        if (extra_log.size() != n) throw DimensionError("update_state_beliefs: extra term size");
        k.axpy(1.0, extra_log.data(), acc.data(), n);
    }
    k.add_scalar(-k.max(acc.data(), n), acc.data(), n);
    k.exp(acc.data(), acc.data(), n);
    if (!(k.sum(acc.data(), n) > 0.0)) throw InferenceError("posterior underflow");
    return normalize(std::move(acc));
}

Categorical predict(const Transition& B, const Categorical& s) {
    if (B.size() != s.size()) throw DimensionError("predict: transition size");
    std::vector<double> out(s.size());
    B.apply(s.data(), out.data());
    return normalize(std::move(out));
}

std::vector<Categorical> rollout(std::span<const Transition> B, const Categorical& s,
                                 std::span<const int> actions) {
    std::vector<Categorical> out;
    out.reserve(actions.size());
    const Categorical* cur = &s;
    for (int a : actions) {
        out.push_back(predict(B[a], *cur));
        cur = &out.back();
    }
    return out;
}

std::vector<double> column_entropies(const Matrix& A) {
    std::vector<double> h(A.cols, 0.0);
    for (std::size_t r = 0; r < A.rows; ++r)
        for (std::size_t c = 0; c < A.cols; ++c) {
            const double p = A(r, c);
            if (p > 0.0) h[c] -= p * std::log(p);
        }
    return h;
}

ModalityScore score_modality(const Matrix& A, const Categorical& qs, const Categorical& C,
                             std::span<const double> col_entropy) {
    if (A.cols != qs.size() || A.rows != C.size()) throw DimensionError("score_modality: shapes");
    const auto& k = simd::kernels();
    std::vector<double> qo(A.rows);
    for (std::size_t r = 0; r < A.rows; ++r) qo[r] = k.dot(A.row(r), qs.data(), qs.size());
    ModalityScore out;
    out.risk = std::max(0.0, k.kl(qo.data(), C.data(), qo.size(), kLogFloor));
    if (col_entropy.empty()) {
        const auto h = column_entropies(A);
        out.ambiguity = k.dot(h.data(), qs.data(), qs.size());
    } else {
        out.ambiguity = k.dot(col_entropy.data(), qs.data(), qs.size());
    }
    return out;
}

PolicyScore expected_free_energy(std::span<const EfeTerm> terms,
                                 std::span<const std::vector<Categorical>* const> sources) {
    PolicyScore g;
    for (const auto& term : terms) {
        for (const auto& qs : *sources[term.source]) {
            const auto s = score_modality(*term.A, qs, *term.C, term.col_entropy);
            g.risk += s.risk;
            if (term.ambiguity) g.ambiguity += s.ambiguity;
        }
    }
    return g;
}

Categorical policy_posterior(std::span<const double> lnE, std::span<const double> G, double gamma,
                             const std::vector<bool>& mask) {
    const std::size_t n = G.size();
    if (lnE.size() != n || mask.size() != n) throw DimensionError("policy_posterior: sizes");
    std::vector<double> x(n, -std::numeric_limits<double>::infinity());
    bool any = false;
    for (std::size_t i = 0; i < n; ++i)
        if (mask[i]) {
            x[i] = lnE[i] - gamma * G[i];
            any = true;
        }
    if (!any) throw InferenceError("no policy is consistent with the executed history");
    return softmax(x);
}

double update_precision(double alpha, double beta, std::span<const double> G,
                        const Categorical& posterior) {
    double expected_value = 0.0;
    for (std::size_t i = 0; i < G.size(); ++i)
        if (posterior[i] > 0.0) expected_value -= posterior[i] * G[i];
    return alpha / std::max(beta - expected_value, 1e-3);
}

PolicyInference infer_policies(std::span<const double> lnE, std::span<const double> G,
                               const std::vector<bool>& mask, double alpha, double beta) {
    PolicyInference out;
    out.gamma = alpha / beta;
    for (int it = 0; it < 16; ++it) {
        out.iterations = it + 1;
        const auto pi = policy_posterior(lnE, G, out.gamma, mask);
        const double next = update_precision(alpha, beta, G, pi);
        const bool done = std::abs(next - out.gamma) < 1e-6;
        out.gamma = next;
        if (done) break;
    }
    out.posterior = policy_posterior(lnE, G, out.gamma, mask);
    return out;
}

std::array<double, 5> own_move_marginal(const Categorical& posterior,
                                        const std::vector<JointPolicy>& policies, Agent self,
                                        int t) {
    std::array<double, 5> m{};
    for (const auto& p : policies) m[static_cast<int>(p.route(self).moves.at(t))] += posterior[p.index];
    return m;
}

Move sample_action(const Categorical& posterior, const std::vector<JointPolicy>& policies,
                   Agent self, int t, Rng& rng) {
    const auto m = own_move_marginal(posterior, policies, self, t);
    return kAllMoves[rng.categorical(m)];
}

std::vector<bool> mask_inconsistent(const std::vector<JointPolicy>& policies, Agent self,
                                    std::span<const Move> history) {
    std::vector<bool> mask(policies.size());
    for (const auto& p : policies) {
        const auto& mv = p.route(self).moves;
        mask[p.index] = history.size() <= mv.size() && std::equal(history.begin(), history.end(), mv.begin());
    }
    return mask;
}

}  // namespace jm
