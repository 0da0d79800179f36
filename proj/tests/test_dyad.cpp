#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "jointmaze/dyad.hpp"
#include "jointmaze/experiments.hpp"

using namespace jm;

namespace {
constexpr Location L(int n) { return n - 1; }

DyadParams sim1_params() {
    auto p = config_from_json(preset_json("sim1")).params;
    p.perception_noise = false;
    return p;
}

// Moves both agents by hand and lets `observer` see the new joint position.
void scripted_step(Dyad& d, Move grey, Move white) {
    const auto& g = canonical_maze();
    for (Agent a : {Agent::Grey, Agent::White}) {
        auto& ag = d.agent(a);
        const Move m = a == Agent::Grey ? grey : white;
        ag.position = apply_move(g, ag.position, m);
        ag.history.push_back(m);
    }
}

// Posterior over contexts from the evidence rule, computed from the model-level pieces.
std::array<double, 4> hand_update(const MazeGraph& g, const std::array<double, 4>& q, Location grey,
                                  Location white, const DyadParams& p) {
    const auto col = joint_salience_column(g, grey, white, 0.5);
    const double d = joint_delta(g, grey, white, 0.5);
    std::array<double, 4> out{};
    double z = 0;
    for (int c = 0; c < 4; ++c) {
        double v = (std::max(col[c], 1e-12) + p.evidence_floor) / (1 + 4 * p.evidence_floor);
        v = d * v + (1 - d) / 4;
        out[c] = q[c] * v;
        z += out[c];
    }
    for (auto& x : out) x /= z;
    return out;
}

const MazeGraph& maze() {
    static const MazeGraph g = canonical_maze();
    return g;
}
}  // namespace

TEST_CASE("carry-over examples") {
    const std::vector<int> follower{0, 3};
    const auto a = carry_over_prior(Categorical::from_probs({0.95, 0.05, 0, 0}), follower);
    CHECK(a[0] == doctest::Approx(0.7));
    CHECK(a[1] == doctest::Approx(0.3));
    const auto b = carry_over_prior(Categorical::from_probs({1, 0, 0, 0}), follower);
    CHECK(b.probs() == std::vector<double>{0.7, 0, 0, 0.3});
    const auto c = carry_over_prior(Categorical::from_probs({0.6, 0.4, 0, 0}), follower);
    CHECK(c.probs() == std::vector<double>{0.6, 0.4, 0, 0});
}

TEST_CASE("property: carry-over caps the mode") {
    const std::vector<int> all{0, 1, 2, 3};
    for (int i = 0; i <= 100; ++i) {
        const double m = 0.25 + 0.75 * i / 100.0;
        const double r = (1 - m) / 3;
        const auto out = carry_over_prior(Categorical::from_probs({r, m, r, r}), all);
        CHECK(out.max() <= 0.7 + 1e-12);
        CHECK(std::accumulate(out.probs().begin(), out.probs().end(), 0.0) == doctest::Approx(1.0));
    }
}

TEST_CASE("mind change") {
    Dyad d(maze(), sim1_params());
    const auto before = d.agent(Agent::Grey).goal_prior;
    d.set_prior(Agent::White, Categorical::from_probs({0.3, 0, 0, 0.7}));
    CHECK(d.flip_target(Agent::White) == GoalContext::BlueBlue);
    d.apply_mind_change(Agent::White, d.flip_target(Agent::White));
    CHECK(d.agent(Agent::White).goal_prior.probs() == std::vector<double>{1, 0, 0, 0});
    CHECK(d.flip_target(Agent::White) == GoalContext::RedRed);
    CHECK(d.agent(Agent::Grey).goal_prior.probs() == before.probs());
}

TEST_CASE("both agents wait: positions hold and beliefs still update") {
    Dyad d(maze(), sim1_params());
    d.begin_trial();
    Rng rng(1);
    scripted_step(d, Move::Wait, Move::Wait);
    const auto prior = d.agent(Agent::Grey).state;
    d.observe(Agent::Grey, 1, rng);
    CHECK(d.agent(Agent::Grey).position == L(3));
    CHECK(d.agent(Agent::White).position == L(19));
    CHECK(d.agent(Agent::Grey).filtered.size() == 2);
    const auto want = hand_update(maze(), {0.5, 0, 0, 0.5}, L(3), L(19), d.params());
    const auto q = d.agent(Agent::Grey).goal_marginal();
    for (int c = 0; c < 4; ++c) CHECK(q[c] == doctest::Approx(want[c]).epsilon(1e-9));
    (void)prior;
}

TEST_CASE("partner stepping toward the red side shifts beliefs toward red") {
    Dyad d(maze(), sim1_params());
    d.begin_trial();
    Rng rng(1);
    scripted_step(d, Move::Wait, Move::Left);
    d.observe(Agent::Grey, 1, rng);
    const auto want = hand_update(maze(), {0.5, 0, 0, 0.5}, L(3), L(18), d.params());
    const auto q = d.agent(Agent::Grey).goal_marginal();
    for (int c = 0; c < 4; ++c) CHECK(q[c] == doctest::Approx(want[c]).epsilon(1e-9));
    CHECK(q[3] > 0.5);
}

TEST_CASE("uniform goal-context likelihood: no shift") {
    auto p = sim1_params();
    p.controls.uniform_a3 = true;
    Dyad d(maze(), p);
    d.begin_trial();
    Rng rng(1);
    scripted_step(d, Move::Wait, Move::Left);
    d.observe(Agent::Grey, 1, rng);
    const auto q = d.agent(Agent::Grey).goal_marginal();
    CHECK(q[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(q[3] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("property: watching a full long route toward red raises red beliefs step by step") {
    for (bool noise : {false, true}) {
        auto p = sim1_params();
        p.perception_noise = noise;
        Dyad d(maze(), p);
        d.begin_trial();
        Rng rng(3);
        const auto route = make_route_policy(maze(), Agent::White, RouteLabel::LongRed).moves;
        const double prior = 0.5;
        double prev = prior;
        for (int t = 0; t < kHorizon; ++t) {
            scripted_step(d, Move::Wait, route[t]);
            d.observe(Agent::Grey, t + 1, rng);
            const auto q = d.agent(Agent::Grey).goal_marginal();
            const double red = q[static_cast<int>(GoalContext::RedRed)] + q[static_cast<int>(GoalContext::RedBlue)];
            if (!noise) CHECK(red >= prev);
            prev = red;
        }
        CHECK(d.agent(Agent::White).position == L(10));
        CHECK(prev > prior);
    }
}

TEST_CASE("exchange is symmetric") {
    Dyad d(maze(), config_from_json(preset_json("sim1")).params);
    d.begin_trial();
    Rng rng(9);
    for (int t = 0; t < kHorizon; ++t) {
        const auto tr = d.run_step(t, rng);
        for (Agent a : {Agent::Grey, Agent::White}) {
            const auto msg = d.message_from(a);
            CHECK(msg.sender == a);
            CHECK(msg.position == d.agent(a).position);
            REQUIRE(msg.last_move.has_value());
            CHECK(*msg.last_move == tr.moves[static_cast<int>(a)]);
        }
        CHECK(env_step(maze(), tr.positions, {tr.moves[0], tr.moves[1]}) ==
              Positions{d.agent(Agent::Grey).position, d.agent(Agent::White).position});
    }
}

TEST_CASE("trial records are complete and deterministic") {
    const auto params = config_from_json(preset_json("sim1")).params;
    Dyad a(maze(), params), b(maze(), params);
    Rng ra(5), rb(5);
    for (int k = 1; k <= 3; ++k) {
        const auto x = a.run_trial(k, ra);
        const auto y = b.run_trial(k, rb);
        CHECK(record_to_json(x).dump() == record_to_json(y).dump());
        CHECK(x.steps.size() == kHorizon);
        for (const auto& s : x.steps) {
            CHECK(s.policy_posterior[0].size() == kPolicies);
            CHECK(s.policy_posterior[1].size() == kPolicies);
        }
        CHECK(x.g_initial[0].size() == kPolicies);
        a.carry_over(Agent::Grey);
        a.carry_over(Agent::White);
        b.carry_over(Agent::Grey);
        b.carry_over(Agent::White);
    }
}

TEST_CASE("agreeing short routes to red end positive and sharpen red beliefs") {
    Dyad d(maze(), config_from_json(preset_json("sim1")).params);
    const auto prior = Categorical::from_probs({0.3, 0, 0, 0.7});
    d.set_prior(Agent::Grey, prior);
    d.set_prior(Agent::White, prior);
    Rng rng(42);
    const auto rec = d.run_trial(1, rng);
    REQUIRE(rec.routes[0] == RouteLabel::ShortRed);
    REQUIRE(rec.routes[1] == RouteLabel::ShortRed);
    CHECK(rec.final_positions == Positions{L(10), L(10)});
    CHECK(rec.outcome == Outcome::Positive);
    CHECK(rec.route_class[0] == RouteClass::Pragmatic);
    for (int i = 0; i < 2; ++i) CHECK(rec.posterior[i][3] > 0.7);
}

TEST_CASE("leader rule in a dyad") {
    auto cfg = config_from_json(preset_json("sim2"));
    CHECK(trial_outcome(maze(), {L(12), L(12)}, cfg.params.roles[1], cfg.params.true_goal) == Outcome::Negative);
    CHECK(trial_outcome(maze(), {L(10), L(12)}, Role::Follower, Goal::None) == Outcome::Negative);
}

TEST_CASE("route classes") {
    const auto& g = maze();
    CHECK(classify_route(g, route_cells(g, Agent::Grey, RouteLabel::LongBlue)) == RouteClass::Epistemic);
    CHECK(classify_route(g, route_cells(g, Agent::White, RouteLabel::ShortRed)) == RouteClass::Pragmatic);
    CHECK(classify_route(g, route_cells(g, Agent::White, RouteLabel::Stay)) == RouteClass::Other);
}

TEST_CASE("initial expected free energy ordering in the two-follower model") {
    Dyad d(maze(), config_from_json(preset_json("sim1")).params);
    d.begin_trial();
    const std::vector<bool> all(kPolicies, true);
    const int sr = static_cast<int>(RouteLabel::ShortRed), sb = static_cast<int>(RouteLabel::ShortBlue);
    for (Agent a : {Agent::Grey, Agent::White}) {
        const auto G = d.score_policies(a, 0, all);
        std::vector<int> idx(kPolicies);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int x, int y) { return G[x] < G[y]; });
        const std::set<int> low{idx[0], idx[1]}, high{idx[23], idx[24]};
        CHECK(low == std::set<int>{sr * 5 + sr, sb * 5 + sb});
        CHECK(high == std::set<int>{sr * 5 + sb, sb * 5 + sr});
        CHECK(G[idx[1]] < G[idx[2]]);
        CHECK(G[idx[22]] < G[idx[23]]);
    }
}
