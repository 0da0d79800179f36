#include <doctest.h>

#include <cmath>

#include "jointmaze/model.hpp"

using namespace jm;

namespace {
constexpr Location L(int n) { return n - 1; }

double column_sum(const Matrix& m, std::size_t c) {
    double s = 0;
    for (std::size_t r = 0; r < m.rows; ++r) s += m(r, c);
    return s;
}

double column_entropy(const std::array<double, 4>& col) {
    double h = 0;
    for (double p : col)
        if (p > 0) h -= p * std::log(p);
    return h;
}

Goal nearest_goal(const MazeGraph& g, Location l) {
    return distance(g, l, g.red_goal) < distance(g, l, g.blue_goal) ? Goal::Red : Goal::Blue;
}
}  // namespace

TEST_CASE("salience examples") {
    const auto g = canonical_maze();
    CHECK(salience(g, L(12), Goal::Blue, 0.5) == doctest::Approx(1.0));
    CHECK(salience(g, L(11), Goal::Blue, 0.5) == doctest::Approx(0.5));
    CHECK(salience(g, L(9), Goal::Blue, 0.7) == doctest::Approx(0.2));
}

TEST_CASE("modulation_delta examples") {
    CHECK(modulation_delta(0.0, 0.3) == doctest::Approx(0.75));
    CHECK(modulation_delta(1.0, 1.0) == doctest::Approx(1.0));
    CHECK(modulation_delta(0.0, 0.0, true) == doctest::Approx(1.0 / 11.0));
    CHECK(modulation_delta(1.0, 1.0, true) == doctest::Approx(1.0 / (1.0 + 10.0 * std::exp(-4.0))));
    CHECK(modulation_delta(1.0, 1.0, true) == doctest::Approx(0.8452).epsilon(1e-4));
    CHECK_THROWS_AS(modulation_delta(-0.1, 0.5), std::domain_error);
    CHECK_THROWS_AS(modulation_delta(0.5, 1.5), std::domain_error);
}

TEST_CASE("property: modulation_delta is bounded and monotone") {
    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = i / 1000.0;
        const double d = modulation_delta(x, 1.0);
        CHECK(d >= 0.75);
        CHECK(d <= 1.0 + 1e-15);
        CHECK(d >= prev);
        CHECK(modulation_delta(std::sqrt(x), std::sqrt(x)) == doctest::Approx(d));
        prev = d;
    }
}

TEST_CASE("position likelihood examples") {
    const auto g = canonical_maze();
    const auto d3 = default_d3(Role::Follower, Agent::Grey, Goal::None);
    const auto pl = build_position_likelihoods(g, Agent::Grey, d3);
    const auto s7 = state_index(L(7), L(19), 3);
    for (int o = 0; o < kCells; ++o) CHECK(pl.A1(o, s7) == (o == L(7) ? 1.0 : 0.0));
    const auto goals = state_index(L(10), L(12), 0);
    CHECK(pl.A2(L(12), goals) == doctest::Approx(1.0));
    const auto centre = state_index(L(11), L(11), 2);
    CHECK(pl.A2(L(11), centre) == doctest::Approx(0.75));
    for (int o = 0; o < kCells; ++o)
        if (o != L(11)) CHECK(pl.A2(o, centre) == doctest::Approx(0.0125));
}

TEST_CASE("joint salience examples") {
    const auto g = canonical_maze();
    const auto rr = static_cast<int>(GoalContext::RedRed);
    const auto A3 = build_joint_salience(g, Agent::Grey, 0.5, false);
    const auto s = state_index(L(10), L(10), 0);
    CHECK(A3(rr, s) == doctest::Approx(1.0));
    const auto c = state_index(L(11), L(11), 1);
    for (int o = 0; o < 4; ++o) CHECK(A3(o, c) == doctest::Approx(0.25));
    const auto U = build_joint_salience(g, Agent::White, 0.5, true);
    for (double v : U.data) CHECK(v == 0.25);
}

TEST_CASE("outcome likelihood examples") {
    const auto g = canonical_maze();
    const auto F = build_outcome_likelihood(g, Agent::Grey, Role::Follower, Goal::None);
    for (int c = 0; c < 4; ++c) {
        CHECK(F(static_cast<int>(Outcome::Positive), state_index(L(10), L(10), c)) == 1.0);
        CHECK(F(static_cast<int>(Outcome::Neutral), state_index(L(3), L(19), c)) == 1.0);
    }
    const auto Ld = build_outcome_likelihood(g, Agent::White, Role::Leader, Goal::Red);
    // White's own slot first: white at L12, grey at L10.
    CHECK(Ld(static_cast<int>(Outcome::Negative), state_index(L(12), L(10), 3)) == 1.0);
    CHECK_THROWS_AS(build_outcome_likelihood(g, Agent::Grey, Role::Leader, Goal::None),
                    std::invalid_argument);
}

TEST_CASE("transition examples") {
    const auto g = canonical_maze();
    const auto B = build_transitions(g, Agent::Grey);
    REQUIRE(B.size() == 25);
    const int rr = 3;
    const auto& lr = B[joint_action_index({Move::Left, Move::Right})];
    CHECK(lr.next[state_index(L(3), L(19), rr)] == state_index(L(2), L(20), rr));
    const auto& ww = B[joint_action_index({Move::Wait, Move::Wait})];
    for (std::size_t s = 0; s < kStates; ++s) REQUIRE(ww.next[s] == s);
    const auto& left = B[joint_action_index({Move::Left, Move::Wait})];
    CHECK(left.next[state_index(L(1), L(5), 2)] == state_index(L(1), L(5), 2));
    // White's model keeps its own slot first.
    const auto W = build_transitions(g, Agent::White);
    CHECK(W[joint_action_index({Move::Left, Move::Right})].next[state_index(L(19), L(3), 0)] ==
          state_index(L(20), L(2), 0));
}

TEST_CASE("policy set examples") {
    const auto g = canonical_maze();
    const auto ps = build_policy_set(g);
    REQUIRE(ps.size() == 25);
    const auto sr = make_route_policy(g, Agent::Grey, RouteLabel::ShortRed);
    CHECK(sr.moves == std::array<Move, 5>{Move::Down, Move::Down, Move::Left, Move::Wait, Move::Wait});
    CHECK(route_cells(g, Agent::Grey, RouteLabel::ShortRed)[3] == L(10));
    const auto lb = make_route_policy(g, Agent::White, RouteLabel::LongBlue);
    CHECK(lb.moves == std::array<Move, 5>{Move::Right, Move::Right, Move::Up, Move::Up, Move::Left});
    CHECK(route_cells(g, Agent::White, RouteLabel::LongBlue).back() == L(12));
    for (int i = 0; i < 25; ++i) {
        CHECK(ps[i].index == i);
        CHECK(static_cast<int>(ps[i].grey.label) == i / 5);
        CHECK(static_cast<int>(ps[i].white.label) == i % 5);
    }
}

TEST_CASE("prior defaults and validation") {
    const auto g = canonical_maze();
    const auto f = default_d3(Role::Follower, Agent::Grey, Goal::None);
    CHECK(f.probs() == std::vector<double>{0.5, 0, 0, 0.5});
    const auto l = default_d3(Role::Leader, Agent::White, Goal::Red);
    CHECK(l[static_cast<int>(GoalContext::RedRed)] == 0.5);
    CHECK(l[static_cast<int>(GoalContext::RedBlue)] == 0.5);
    const auto m = assemble_model(g, Agent::Grey, Role::Follower, Goal::None, f, ModelControls{});
    CHECK(m.E.probs() == std::vector<double>(25, 1.0 / 25));
    CHECK(m.alpha == 1.0);
    CHECK(m.beta == 1.0);
    CHECK(m.C4[2] > m.C4[1]);
    CHECK(m.C4[1] > m.C4[0]);
    CHECK(std::log(m.C4[2] / m.C4[1]) == doctest::Approx(3.0));
    ModelControls u;
    u.uniform_a3 = true;
    const auto mu = assemble_model(g, Agent::Grey, Role::Follower, Goal::None, f, u);
    for (double v : mu.A3.data) CHECK(v == 0.25);
    CHECK_THROWS_AS(assemble_model(g, Agent::Grey, Role::Follower, Goal::None,
                                   Categorical::from_probs({0, 0, 1, 0}), ModelControls{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(assemble_model(g, Agent::White, Role::Leader, Goal::None, f, ModelControls{}),
                    std::invalid_argument);
}

TEST_CASE("property: every likelihood and transition column is a distribution") {
    const auto g = canonical_maze();
    for (Agent a : {Agent::Grey, Agent::White})
        for (double mode : {0.5, 0.7, 1.0}) {
            const auto d3 = Categorical::from_probs({mode, 0, 0, 1 - mode});
            const auto m = assemble_model(g, a, Role::Follower, Goal::None, d3, ModelControls{});
            for (std::size_t s = 0; s < kStates; ++s) {
                REQUIRE(std::abs(column_sum(m.A1, s) - 1) < 1e-9);
                REQUIRE(std::abs(column_sum(m.A2, s) - 1) < 1e-9);
                REQUIRE(std::abs(column_sum(m.A3, s) - 1) < 1e-9);
                REQUIRE(std::abs(column_sum(m.A4, s) - 1) < 1e-9);
                const auto [own, oth] = std::pair{static_cast<Location>(s / 84), static_cast<Location>(s / 4 % 21)};
                const double t = m.A2(oth, s);
                REQUIRE(t >= 0.75 - 1e-12);
                REQUIRE(t <= 1.0 + 1e-12);
                (void)own;
            }
            for (const auto& b : *m.B) {
                REQUIRE(b.deterministic());
                for (std::size_t n : b.next) REQUIRE(n < kStates);
            }
            double c = 0;
            for (double v : m.C4.probs()) c += v;
            CHECK(std::abs(c - 1) < 1e-9);
        }
}

TEST_CASE("property: salience argmax follows the nearest goals") {
    const auto g = canonical_maze();
    const Location cells[] = {L(9), L(10), L(12), L(13)};
    for (Location grey : cells)
        for (Location white : cells) {
            const auto col = joint_salience_column(g, grey, white, 0.5);
            const int want = static_cast<int>(make_context(nearest_goal(g, white), nearest_goal(g, grey)));
            int best = 0;
            for (int c = 1; c < 4; ++c)
                if (col[c] > col[best]) best = c;
            CHECK(best == want);
        }
}

TEST_CASE("property: a higher belief mode never sharpens the salience columns") {
    const auto g = canonical_maze();
    for (Location a = 0; a < kCells; ++a)
        for (Location b = 0; b < kCells; ++b) {
            const double h0 = column_entropy(joint_salience_column(g, a, b, 0.5));
            double prev = h0;
            for (double mode : {0.6, 0.7, 0.85, 1.0}) {
                const double h = column_entropy(joint_salience_column(g, a, b, mode));
                REQUIRE(h >= prev - 1e-12);
                prev = h;
            }
        }
}

TEST_CASE("property: policies executed open loop end where their labels say") {
    const auto g = canonical_maze();
    for (const auto& p : build_policy_set(g)) {
        Positions pos{g.grey_start, g.white_start};
        for (int t = 0; t < kHorizon; ++t) pos = env_step(g, pos, {p.grey.moves[t], p.white.moves[t]});
        for (Agent a : {Agent::Grey, Agent::White}) {
            const auto r = p.route(a).label;
            const Location want = r == RouteLabel::Stay ? g.start(a) : g.goal_cell(route_goal(r));
            CHECK(pos[static_cast<int>(a)] == want);
        }
    }
}

TEST_CASE("model json dump") {
    const auto g = canonical_maze();
    const auto m = assemble_model(g, Agent::White, Role::Leader, Goal::Red,
                                  default_d3(Role::Leader, Agent::White, Goal::Red), ModelControls{});
    const auto j = model_to_json(m);
    CHECK(j.contains("D3"));
    CHECK(j.contains("role"));
}
