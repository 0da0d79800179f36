#include "jointmaze/dyad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jm {

namespace {

std::array<double, 4> to_array(const Categorical& c) {
    return {c[0], c[1], c[2], c[3]};
}

int ctx_of(std::size_t s) { return static_cast<int>(s % kContexts); }

}  // namespace

Categorical AgentRuntime::goal_marginal() const {
    std::vector<double> q(kContexts, 0.0);
    for (std::size_t s = 0; s < state.size(); ++s) q[ctx_of(s)] += state[s];
    return normalize(std::move(q));
}

const char* to_string(RouteClass c) {
    switch (c) {
        case RouteClass::Pragmatic: return "pragmatic";
        case RouteClass::Epistemic: return "epistemic";
        case RouteClass::Other: return "other";
    }
    return "?";
}

RouteClass classify_route(const MazeGraph& g, const std::vector<Location>& cells) {
    auto corner = [&](Location l) {
        const auto [r, c] = g.coords.at(l);
        return (r == 0 || r == 4) && (c == 0 || c == 4);
    };
    auto corridor = [&](Location l) {
        const auto [r, c] = g.coords.at(l);
        return c == 2 && (r == 1 || r == 3);
    };
    if (std::any_of(cells.begin(), cells.end(), corner)) return RouteClass::Epistemic;
    if (std::any_of(cells.begin(), cells.end(), corridor) && g.is_goal(cells.back()))
        return RouteClass::Pragmatic;
    return RouteClass::Other;
}

Agent focal_agent(const TrialRecord& r) {
    if (r.roles[1] == Role::Leader) return Agent::White;
    if (r.roles[0] == Role::Leader) return Agent::Grey;
    return Agent::White;
}

Categorical carry_over_prior(const Categorical& posterior, std::span<const int> permitted) {
    const std::size_t mode = posterior.argmax();
    if (posterior[mode] <= 0.7) return posterior;
    std::vector<double> out(posterior.size(), 0.0);
    const double rest = 1.0 - posterior[mode];
    if (rest > 1e-12) {
        for (std::size_t i = 0; i < out.size(); ++i)
            if (i != mode) out[i] = posterior[i] * 0.3 / rest;
    } else {
        std::vector<int> others;
        for (int c : permitted)
            if (static_cast<std::size_t>(c) != mode) others.push_back(c);
        if (others.empty()) throw std::invalid_argument("carry-over: no context to receive mass");
        for (int c : others) out[c] = 0.3 / static_cast<double>(others.size());
    }
    out[mode] = 0.7;
    return normalize(std::move(out));
}

Dyad::Dyad(const MazeGraph& g, DyadParams params) : g_(&g), params_(std::move(params)) {
    for (Agent a : {Agent::Grey, Agent::White}) {
        auto& ag = agents_[static_cast<int>(a)];
        ag.id = a;
        const Role role = params_.roles[static_cast<int>(a)];
        const Goal goal = role == Role::Leader ? params_.true_goal : Goal::None;
        const Categorical d3 = default_d3(role, a, goal);
        ag.base = assemble_model(g, a, role, goal, d3, params_.controls);
        ag.a4_entropy = column_entropies(ag.base.A4);
        ag.goal_prior = d3;
    }
}

void Dyad::set_prior(Agent a, const Categorical& d3) {
    auto& ag = agent(a);
    (void)with_prior(ag.base, *g_, d3);  // validates the support
    ag.goal_prior = d3;
}

void Dyad::carry_over(Agent a) {
    auto& ag = agent(a);
    const auto allowed = permitted_contexts(ag.base.role, a, ag.base.true_goal);
    // Contexts outside the role's support only hold floor-level leakage.
    const Categorical q = ag.goal_marginal();
    std::vector<double> kept(kContexts, 0.0);
    for (int c : allowed) kept[c] = q[c];
    ag.goal_prior = carry_over_prior(normalize(std::move(kept)), allowed);
}

GoalContext Dyad::flip_target(Agent a) const {
    const auto mode = static_cast<GoalContext>(agent(a).goal_prior.argmax());
    const auto flip = [](Goal x) { return x == Goal::Red ? Goal::Blue : Goal::Red; };
    return make_context(flip(goal_of(mode, Agent::White)), flip(goal_of(mode, Agent::Grey)));
}

void Dyad::apply_mind_change(Agent a, GoalContext target) {
    set_prior(a, Categorical::delta(kContexts, static_cast<int>(target)));
}

ExchangeMessage Dyad::message_from(Agent a) const {
    const auto& ag = agent(a);
    ExchangeMessage m{a, ag.position, std::nullopt};
    if (!ag.history.empty()) m.last_move = ag.history.back();
    return m;
}

void Dyad::begin_trial() {
    for (auto& ag : agents_) {
        ag.model = with_prior(ag.base, *g_, ag.goal_prior);
        ag.a3_entropy = column_entropies(ag.model.A3);
        ag.state = ag.model.initial_state();
        ag.filtered = {std::make_shared<const Categorical>(ag.state)};
        ag.position = g_->start(ag.id);
        ag.history.clear();
        ag.belief = BeliefState{};
        ag.belief.consistency_mask.assign(kPolicies, true);
    }
}

void Dyad::observe(Agent a, int t, Rng& rng, Location* perceived) {
    auto& ag = agent(a);
    const auto msg = message_from(other(a));
    const Location own = ag.position;
    const Location oth = msg.position;
    if (t == 0) return;

    const auto& mine = ag.history.back();
    const JointAction u = a == Agent::Grey ? JointAction{mine, *msg.last_move}
                                           : JointAction{*msg.last_move, mine};
    const Categorical prior = predict((*ag.model.B)[joint_action_index(u)], ag.state);

    const std::size_t here = state_index(own, oth, 0);
    Location seen = oth;
    if (params_.perception_noise) {
        std::array<double, kCells> col{};
        for (int o = 0; o < kCells; ++o) col[o] = ag.model.A2(o, here);
        seen = static_cast<Location>(rng.categorical(col));
    }
    if (perceived) *perceived = seen;

    // Goal-context pseudo-observation: the A3 column at the perceived joint
    // position, floored and discounted by how reliable the percept is.
    const std::size_t seen_state = state_index(own, seen, 0);
    const double eta = params_.evidence_floor;
    double w = 1.0;
    if (ag.model.role == Role::Leader && !ag.history.empty() &&
        (ag.history.front() == Move::Left || ag.history.front() == Move::Right))
        w = params_.leader_signal_exponent;
    std::array<double, kContexts> log_ev{};
    for (int c = 0; c < kContexts; ++c) {
        double v = (std::max(ag.model.A3(c, seen_state), kLogFloor) + eta) / (1.0 + 4.0 * eta);
        if (params_.reliability_discount) {
            const double d = ag.model.A2(seen, seen_state);
            v = d * v + (1.0 - d) / 4.0;
        }
        log_ev[c] = w * std::log(v);
    }
    std::vector<double> extra(kStates);
    for (std::size_t s = 0; s < extra.size(); ++s) extra[s] = log_ev[ctx_of(s)];

    const Matrix* A[] = {&ag.model.A1, &ag.model.A2};
    const int obs[] = {own, oth};
    ag.state = update_state_beliefs(A, obs, prior, extra);
    ag.filtered.push_back(std::make_shared<const Categorical>(ag.state));
}

std::vector<double> Dyad::score_policies(Agent a, int t, const std::vector<bool>& mask,
                                         BeliefState* belief) const {
    const auto& ag = agent(a);
    const auto& m = ag.model;
    const Categorical q = ag.goal_marginal();
    std::vector<double> c3(kContexts);
    for (int c = 0; c < kContexts; ++c)
        c3[c] = (1.0 - params_.preference_mix) * q[c] + params_.preference_mix / kContexts;
    const Categorical C3 = normalize(std::move(c3));
    const bool amb = !params_.drop_epistemic;
    const bool social = m.role == Role::Leader && !params_.drop_epistemic;

    std::vector<EfeTerm> terms{{&m.A3, &C3, ag.a3_entropy, 0, amb},
                               {&m.A4, &m.C4, ag.a4_entropy, social ? 1u : 0u, amb}};
    if (params_.position_terms_in_efe) {
        terms.push_back({&m.A1, &m.C1, {}, 0, amb});
        terms.push_back({&m.A2, &m.C2, {}, 0, amb});
    }

    const Agent partner = other(a);
    std::vector<double> G(kPolicies, 0.0);
    std::vector<int> actions;
    for (const auto& pol : m.policies) {
        if (!mask[pol.index]) continue;
        auto joint_actions = [&](const RoutePolicy& own, const RoutePolicy& theirs) {
            actions.clear();
            for (int tau = t; tau < kHorizon; ++tau) {
                const JointAction u = a == Agent::Grey ? JointAction{own.moves[tau], theirs.moves[tau]}
                                                       : JointAction{theirs.moves[tau], own.moves[tau]};
                actions.push_back(joint_action_index(u));
            }
            return rollout(*m.B, ag.state, actions);
        };
        const auto literal = joint_actions(pol.route(a), pol.route(partner));
        std::vector<Categorical> mixed;
        if (social) {
            const auto opts = partner_response(*g_, a, pol.route(a).label, pol.route(partner).label, q,
                                               m.true_goal);
            std::vector<std::vector<double>> acc(literal.size(), std::vector<double>(kStates, 0.0));
            for (const auto& o : opts) {
                if (o.weight <= 0.0) continue;
                const auto r = joint_actions(pol.route(a), make_route_policy(*g_, partner, o.route));
                for (std::size_t k = 0; k < r.size(); ++k)
                    for (std::size_t s = 0; s < kStates; ++s) acc[k][s] += o.weight * r[k][s];
            }
            for (auto& v : acc) mixed.push_back(normalize(std::move(v)));
        }
        const std::vector<Categorical>* sources[] = {&literal, social ? &mixed : &literal};
        G[pol.index] = expected_free_energy(terms, sources).total();
        if (belief) {
            auto& row = belief->per_policy_states[pol.index];
            row = ag.filtered;
            for (const auto& c : literal) row.push_back(std::make_shared<const Categorical>(c));
        }
    }
    return G;
}

StepTrace Dyad::run_step(int t, Rng& rng) {
    if (t < 0 || t >= kHorizon) throw std::out_of_range("run_step: t outside the horizon");
    StepTrace tr;
    tr.t = t;
    tr.positions = {agent(Agent::Grey).position, agent(Agent::White).position};
    std::array<Move, 2> chosen{};
    for (Agent a : {Agent::Grey, Agent::White}) {
        const int i = static_cast<int>(a);
        auto& ag = agent(a);
        observe(a, t, rng, &tr.perceived[i]);
        const auto mask = mask_inconsistent(ag.model.policies, a, ag.history);
        ag.belief.per_policy_states.assign(kPolicies, {});
        const auto G = score_policies(a, t, mask, &ag.belief);
        const std::vector<double> lnE(kPolicies, std::log(1.0 / kPolicies));
        const auto inf = infer_policies(lnE, G, mask, ag.model.alpha, ag.model.beta);
        ag.belief.consistency_mask = mask;
        ag.belief.policy_posterior = inf.posterior;
        ag.belief.precision = inf.gamma;
        chosen[i] = sample_action(inf.posterior, ag.model.policies, a, t, rng);
        tr.policy_posterior[i] = inf.posterior.probs();
        tr.goal_marginal[i] = to_array(ag.goal_marginal());
        tr.precision[i] = inf.gamma;
        last_g_[i] = G;
    }
    const Positions next = env_step(*g_, tr.positions, {chosen[0], chosen[1]});
    for (Agent a : {Agent::Grey, Agent::White}) {
        agent(a).position = next[static_cast<int>(a)];
        agent(a).history.push_back(chosen[static_cast<int>(a)]);
    }
    tr.moves = chosen;
    return tr;
}

TrialRecord Dyad::run_trial(int trial_index, Rng& rng) {
    TrialRecord rec;
    rec.trial_index = trial_index;
    rec.roles = params_.roles;
    for (Agent a : {Agent::Grey, Agent::White}) rec.prior[static_cast<int>(a)] = to_array(agent(a).goal_prior);
    begin_trial();
    for (int t = 0; t < kHorizon; ++t) {
        rec.steps.push_back(run_step(t, rng));
        if (t == 0) rec.g_initial = last_g_;
    }
    rec.final_positions = {agent(Agent::Grey).position, agent(Agent::White).position};
    for (Agent a : {Agent::Grey, Agent::White}) {
        const int i = static_cast<int>(a);
        const auto& m = agent(a).model;
        rec.outcomes[i] = trial_outcome(*g_, rec.final_positions, m.role, m.true_goal);
    }
    rec.outcome = rec.outcomes[0];
    for (Agent a : {Agent::Grey, Agent::White})
        if (agent(a).model.role == Role::Leader) rec.outcome = rec.outcomes[static_cast<int>(a)];

    for (Agent a : {Agent::Grey, Agent::White}) {
        observe(a, kHorizon, rng);
        auto& ag = agent(a);
        const Matrix* A[] = {&ag.model.A4};
        const int obs[] = {static_cast<int>(rec.outcomes[static_cast<int>(a)])};
        ag.state = update_state_beliefs(A, obs, ag.state);
    }

    for (Agent a : {Agent::Grey, Agent::White}) {
        const int i = static_cast<int>(a);
        const auto& ag = agent(a);
        rec.posterior[i] = to_array(ag.goal_marginal());
        for (RouteLabel r : kAllRoutes) {
            const auto& mv = make_route_policy(*g_, a, r).moves;
            if (std::equal(mv.begin(), mv.end(), ag.history.begin(), ag.history.end())) rec.routes[i] = r;
        }
        std::vector<Location> cells{g_->start(a)};
        for (Move mv : ag.history) cells.push_back(apply_move(*g_, cells.back(), mv));
        rec.route_class[i] = classify_route(*g_, cells);
    }
    return rec;
}

}  // namespace jm
