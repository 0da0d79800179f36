#pragma once
// Variational updates for one agent: state estimation, expected free
// energy, policy posterior, precision, action sampling.
//
// G is stored as a non-negative cost (risk + ambiguity, lower is better).
// The precision update consumes the opposite sign; see update_precision.

#include <array>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "jointmaze/model.hpp"
#include "jointmaze/rng.hpp"
#include "jointmaze/tensor.hpp"

namespace jm {

struct InferenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// posterior ∝ exp(sum_m ln A_m[o_m, s] + extra_log[s] + ln prior[s]), every
// log floored at 1e-12. obs[m] < 0 skips modality m; extra_log may be empty.
Categorical update_state_beliefs(std::span<const Matrix* const> A, std::span<const int> obs,
                                 const Categorical& prior, std::span<const double> extra_log = {});

Categorical predict(const Transition& B, const Categorical& s);
// Predicted states after each action in turn.
std::vector<Categorical> rollout(std::span<const Transition> B, const Categorical& s,
                                 std::span<const int> actions);

// H of every column of A.
std::vector<double> column_entropies(const Matrix& A);

struct ModalityScore {
    double risk = 0.0;       // KL[Q(o) || C]
    double ambiguity = 0.0;  // E_Q(s) H[P(o|s)]
};
// Q(o) = A Q(s). col_entropy may be empty (computed on the fly).
ModalityScore score_modality(const Matrix& A, const Categorical& qs, const Categorical& C,
                             std::span<const double> col_entropy = {});

struct PolicyScore {
    double risk = 0.0;
    double ambiguity = 0.0;
    double total() const { return risk + ambiguity; }
};

// One modality's contribution: which prediction stream to read and
// whether the ambiguity term counts.
struct EfeTerm {
    const Matrix* A = nullptr;
    const Categorical* C = nullptr;
    std::span<const double> col_entropy;
    std::size_t source = 0;
    bool ambiguity = true;
};

// Sums each term over the predicted steps of its source.
PolicyScore expected_free_energy(std::span<const EfeTerm> terms,
                                 std::span<const std::vector<Categorical>* const> sources);

// softmax(ln E - gamma G) over unmasked policies; masked ones get 0.
Categorical policy_posterior(std::span<const double> lnE, std::span<const double> G, double gamma,
                             const std::vector<bool>& mask);
// gamma = alpha / (beta - V) with V = -sum pi G the expected value (the
// negated cost); denominator clamped at 1e-3.
double update_precision(double alpha, double beta, std::span<const double> G,
                        const Categorical& posterior);

struct PolicyInference {
    Categorical posterior;
    double gamma = 1.0;
    int iterations = 0;
};
// Alternates the two updates from gamma = alpha / beta until the change is
// below 1e-6 or 16 rounds pass.
PolicyInference infer_policies(std::span<const double> lnE, std::span<const double> G,
                               const std::vector<bool>& mask, double alpha, double beta);

std::array<double, 5> own_move_marginal(const Categorical& posterior,
                                        const std::vector<JointPolicy>& policies, Agent self,
                                        int t);
Move sample_action(const Categorical& posterior, const std::vector<JointPolicy>& policies,
                   Agent self, int t, Rng& rng);

std::vector<bool> mask_inconsistent(const std::vector<JointPolicy>& policies, Agent self,
                                    std::span<const Move> history);

struct BeliefState {
    // [policy][time 0..T]; past entries are shared filtered beliefs, future
    // entries the policy's predictions. Masked policies hold no predictions.
    std::vector<std::vector<std::shared_ptr<const Categorical>>> per_policy_states;
    Categorical policy_posterior;
    double precision = 1.0;
    std::vector<bool> consistency_mask;
};

}  // namespace jm
