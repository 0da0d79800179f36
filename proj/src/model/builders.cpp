#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jointmaze/model.hpp"

namespace jm {

Goal goal_of(GoalContext c, Agent a) {
    const int i = static_cast<int>(c);
    const bool red = a == Agent::White ? (i >= 2) : (i % 2 == 1);
    return red ? Goal::Red : Goal::Blue;
}

GoalContext make_context(Goal white, Goal grey) {
    return static_cast<GoalContext>((white == Goal::Red ? 2 : 0) + (grey == Goal::Red ? 1 : 0));
}

const char* to_string(GoalContext c) {
    switch (c) {
        case GoalContext::BlueBlue: return "blue_blue";
        case GoalContext::BlueRed: return "blue_red";
        case GoalContext::RedBlue: return "red_blue";
        case GoalContext::RedRed: return "red_red";
    }
    return "?";
}

std::optional<GoalContext> parse_context(const std::string& s) {
    for (GoalContext c : kAllContexts)
        if (s == to_string(c)) return c;
    return std::nullopt;
}

std::size_t state_index(Location own, Location other, int ctx) {
    return (static_cast<std::size_t>(own) * kCells + other) * kContexts + ctx;
}

Positions to_positions(Agent self, Location own, Location other) {
    return self == Agent::Grey ? Positions{own, other} : Positions{other, own};
}

PositionLikelihoods build_position_likelihoods(const MazeGraph& g, Agent self,
                                               const Categorical& d3,
                                               const SalienceOptions& opt) {
    PositionLikelihoods out{Matrix(kCells, kStates), Matrix(kCells, kStates)};
    const double mode = d3.max();
    for (Location own = 0; own < kCells; ++own)
        for (Location oth = 0; oth < kCells; ++oth) {
            const double d = joint_delta(g, own, oth, mode, opt);
            for (int c = 0; c < kContexts; ++c) {
                const std::size_t s = state_index(own, oth, c);
                out.A1(own, s) = 1.0;
                for (Location o = 0; o < kCells; ++o) out.A2(o, s) = o == oth ? d : (1.0 - d) / 20.0;
            }
        }
    (void)self;  // delta is symmetric in the two agents
    return out;
}

Matrix build_joint_salience(const MazeGraph& g, Agent self, double d3_mode, bool uniform,
                            const SalienceOptions& opt) {
    Matrix A3(kContexts, kStates, 0.25);
    if (uniform) return A3;
    for (Location own = 0; own < kCells; ++own)
        for (Location oth = 0; oth < kCells; ++oth) {
            const Positions p = to_positions(self, own, oth);
            const auto col = joint_salience_column(g, p[0], p[1], d3_mode, opt);
            for (int c = 0; c < kContexts; ++c)
                for (int o = 0; o < kContexts; ++o) A3(o, state_index(own, oth, c)) = col[o];
        }
    return A3;
}

Matrix build_outcome_likelihood(const MazeGraph& g, Agent self, Role role, Goal true_goal) {
    if (role == Role::Leader && true_goal == Goal::None)
        throw std::invalid_argument("leader model requires true_goal red or blue");
    Matrix A4(kOutcomes, kStates);
    for (Location own = 0; own < kCells; ++own)
        for (Location oth = 0; oth < kCells; ++oth) {
            const Outcome o = trial_outcome(g, to_positions(self, own, oth), role, true_goal);
            for (int c = 0; c < kContexts; ++c) A4(static_cast<int>(o), state_index(own, oth, c)) = 1.0;
        }
    return A4;
}

int joint_action_index(const JointAction& u) {
    return static_cast<int>(u.grey) * 5 + static_cast<int>(u.white);
}

std::vector<Transition> build_transitions(const MazeGraph& g, Agent self) {
    std::vector<Transition> B(25);
    for (Move gm : kAllMoves)
        for (Move wm : kAllMoves) {
            const JointAction u{gm, wm};
            const Move mine = self == Agent::Grey ? gm : wm;
            const Move theirs = self == Agent::Grey ? wm : gm;
            auto& next = B[joint_action_index(u)].next;
            next.resize(kStates);
            for (Location own = 0; own < kCells; ++own)
                for (Location oth = 0; oth < kCells; ++oth)
                    for (int c = 0; c < kContexts; ++c)
                        next[state_index(own, oth, c)] =
                            state_index(apply_move(g, own, mine), apply_move(g, oth, theirs), c);
        }
    return B;
}

std::vector<int> permitted_contexts(Role role, Agent self, Goal true_goal) {
    std::vector<int> out;
    for (GoalContext c : kAllContexts) {
        const bool ok = role == Role::Follower ? goal_of(c, Agent::Grey) == goal_of(c, Agent::White)
                                               : goal_of(c, self) == true_goal;
        if (ok) out.push_back(static_cast<int>(c));
    }
    return out;
}

Categorical default_d3(Role role, Agent self, Goal true_goal) {
    if (role == Role::Leader && true_goal == Goal::None)
        throw std::invalid_argument("leader prior requires true_goal red or blue");
    std::vector<double> p(kContexts, 0.0);
    const auto allowed = permitted_contexts(role, self, true_goal);
    for (int c : allowed) p[c] = 1.0 / static_cast<double>(allowed.size());
    return Categorical::from_probs(std::move(p));
}

Categorical outcome_preference(double magnitude) {
    const std::vector<double> logc{-magnitude, 0.0, magnitude};
    return softmax(logc);
}

Categorical GenerativeModel::initial_state() const {
    std::vector<double> s(kStates, 0.0);
    const Location own = static_cast<Location>(D1.argmax());
    const Location oth = static_cast<Location>(D2.argmax());
    for (int c = 0; c < kContexts; ++c) s[state_index(own, oth, c)] = D3[c];
    return Categorical::from_probs(std::move(s));
}

GenerativeModel assemble_model(const MazeGraph& g, Agent self, Role role, Goal true_goal,
                               const Categorical& d3, const ModelControls& controls) {
    if (d3.size() != kContexts) throw std::invalid_argument("D3 must cover four goal contexts");
    const auto allowed = permitted_contexts(role, self, true_goal);
    for (int c = 0; c < kContexts; ++c)
        if (d3[c] > 1e-9 && std::find(allowed.begin(), allowed.end(), c) == allowed.end())
            throw std::invalid_argument(std::string("D3 puts mass on ") +
                                        to_string(static_cast<GoalContext>(c)) + ", not allowed for a " +
                                        to_string(role));
    if (!(controls.alpha > 0) || !(controls.beta > 0))
        throw std::invalid_argument("alpha and beta must be positive");

    GenerativeModel m;
    m.self = self;
    m.role = role;
    m.true_goal = true_goal;
    m.controls = controls;
    m.d3_mode = d3.max();
    auto pos = build_position_likelihoods(g, self, d3, controls.salience);
    m.A1 = std::move(pos.A1);
    m.A2 = std::move(pos.A2);
    m.A3 = build_joint_salience(g, self, m.d3_mode, controls.uniform_a3, controls.salience);
    m.A4 = build_outcome_likelihood(g, self, role, true_goal);
    m.B = std::make_shared<const std::vector<Transition>>(build_transitions(g, self));
    m.C1 = Categorical::uniform(kCells);
    m.C2 = Categorical::uniform(kCells);
    m.C3 = Categorical::uniform(kContexts);
    m.C4 = outcome_preference(controls.c4_magnitude);
    m.D1 = Categorical::delta(kCells, g.start(self));
    m.D2 = Categorical::delta(kCells, g.start(other(self)));
    m.D3 = d3;
    m.E = Categorical::uniform(kPolicies);
    m.alpha = controls.alpha;
    m.beta = controls.beta;
    m.policies = build_policy_set(g);
    return m;
}

GenerativeModel with_prior(const GenerativeModel& base, const MazeGraph& g, const Categorical& d3) {
    const auto allowed = permitted_contexts(base.role, base.self, base.true_goal);
    for (int c = 0; c < kContexts; ++c)
        if (d3[c] > 1e-9 && std::find(allowed.begin(), allowed.end(), c) == allowed.end())
            throw std::invalid_argument("D3 outside the contexts allowed for this role");
    GenerativeModel m = base;
    m.D3 = d3;
    m.d3_mode = d3.max();
    m.A2 = build_position_likelihoods(g, m.self, d3, m.controls.salience).A2;
    m.A3 = build_joint_salience(g, m.self, m.d3_mode, m.controls.uniform_a3, m.controls.salience);
    return m;
}

nlohmann::json model_to_json(const GenerativeModel& m) {
    auto shape = [](const Matrix& a) { return nlohmann::json::array({a.rows, a.cols}); };
    nlohmann::json pols = nlohmann::json::array();
    for (const auto& p : m.policies) {
        auto moves = [](const RoutePolicy& r) {
            nlohmann::json j = nlohmann::json::array();
            for (Move mv : r.moves) j.push_back(to_string(mv));
            return j;
        };
        pols.push_back({{"index", p.index},
                        {"grey", to_string(p.grey.label)},
                        {"white", to_string(p.white.label)},
                        {"grey_moves", moves(p.grey)},
                        {"white_moves", moves(p.white)}});
    }
    nlohmann::json d3 = nlohmann::json::object();
    for (GoalContext c : kAllContexts) d3[to_string(c)] = m.D3[static_cast<int>(c)];
    return {{"agent", to_string(m.self)},
            {"role", to_string(m.role)},
            {"true_goal", to_string(m.true_goal)},
            {"state_factors", {kCells, kCells, kContexts}},
            {"shapes",
             {{"A1", shape(m.A1)},
              {"A2", shape(m.A2)},
              {"A3", shape(m.A3)},
              {"A4", shape(m.A4)},
              {"B", {m.B->size(), kStates, kStates}}}},
            {"C4", m.C4.probs()},
            {"D3", d3},
            {"d3_mode", m.d3_mode},
            {"E", m.E.probs()},
            {"alpha", m.alpha},
            {"beta", m.beta},
            {"horizon", m.horizon},
            {"flags",
             {{"uniform_a3", m.controls.uniform_a3},
              {"c4_magnitude", m.controls.c4_magnitude},
              {"distance", m.controls.salience.metric == DistanceMetric::Euclidean ? "euclidean"
                                                                                   : "shortest_path"},
              {"delta_mode", m.controls.salience.raw_delta ? "raw" : "rescaled"}}},
            {"policies", pols}};
}

}  // namespace jm
