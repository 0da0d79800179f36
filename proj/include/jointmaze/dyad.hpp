#pragma once
// Two agents in the maze: perception-action cycles with position/move
// exchange, end-of-trial feedback and prior carry-over between trials.

#include <array>
#include <optional>
#include <vector>

#include "jointmaze/engine.hpp"
#include "jointmaze/maze.hpp"
#include "jointmaze/model.hpp"
#include "jointmaze/rng.hpp"

namespace jm {

struct DyadParams {
    ModelControls controls;
    std::array<Role, 2> roles{Role::Follower, Role::Follower};  // [grey, white]
    Goal true_goal = Goal::None;
    // C3 = (1 - preference_mix) q + preference_mix / 4.
    double preference_mix = 0.2;
    // Uniform mass mixed into each goal-context likelihood column.
    double evidence_floor = 0.25;
    // Shrink goal-context evidence toward uniform by the perceived delta.
    bool reliability_discount = true;
    // Partner position on the goal-context channel is sampled through A2.
    bool perception_noise = true;
    // Evidence exponent for a leader that has committed to a long route.
    double leader_signal_exponent = 0.01;
    bool drop_epistemic = false;
    // A1/A2 add a policy-independent constant to G; off by default.
    bool position_terms_in_efe = false;
};

struct ExchangeMessage {
    Agent sender = Agent::Grey;
    Location position = 0;
    std::optional<Move> last_move;
};

struct AgentRuntime {
    Agent id = Agent::Grey;
    GenerativeModel base;   // prior-independent parts
    GenerativeModel model;  // this trial's model
    BeliefState belief;
    Categorical state;      // filtered belief over the 1764 states
    Location position = 0;
    std::vector<Move> history;
    Categorical goal_prior;
    std::vector<double> a3_entropy, a4_entropy;
    std::vector<std::shared_ptr<const Categorical>> filtered;  // one per observed step

    Categorical goal_marginal() const;
};

struct StepTrace {
    int t = 0;
    Positions positions{};
    std::array<Location, 2> perceived{-1, -1};
    std::array<Move, 2> moves{};
    std::array<std::vector<double>, 2> policy_posterior;
    std::array<std::array<double, 4>, 2> goal_marginal{};
    std::array<double, 2> precision{};
};

enum class RouteClass { Pragmatic, Epistemic, Other };
const char* to_string(RouteClass c);
RouteClass classify_route(const MazeGraph& g, const std::vector<Location>& cells);

struct TrialRecord;
// The leader if there is one, else white.
Agent focal_agent(const TrialRecord& r);

struct TrialRecord {
    int replication = 0;
    int trial_index = 0;  // 1-based
    std::array<Role, 2> roles{};
    std::array<std::array<double, 4>, 2> prior{};
    std::array<std::optional<GoalContext>, 2> mind_change;
    std::vector<StepTrace> steps;
    Positions final_positions{};
    std::array<Outcome, 2> outcomes{};  // each agent's own rule
    Outcome outcome = Outcome::Neutral;  // leader's rule if any, else shared
    std::array<std::optional<RouteLabel>, 2> routes;
    std::array<RouteClass, 2> route_class{};
    std::array<std::array<double, 4>, 2> posterior{};
    std::array<std::vector<double>, 2> g_initial;  // G per policy at t = 0
};

class Dyad {
public:
    Dyad(const MazeGraph& g, DyadParams params);

    const DyadParams& params() const { return params_; }
    AgentRuntime& agent(Agent a) { return agents_[static_cast<int>(a)]; }
    const AgentRuntime& agent(Agent a) const { return agents_[static_cast<int>(a)]; }

    void set_prior(Agent a, const Categorical& d3);
    // Next trial's prior from this agent's end-of-trial posterior.
    void carry_over(Agent a);
    // Delta on the target; "flip" target chosen from the current prior.
    void apply_mind_change(Agent a, GoalContext target);
    GoalContext flip_target(Agent a) const;

    // Resets positions/beliefs from the current priors and plays T steps.
    TrialRecord run_trial(int trial_index, Rng& rng);

    // Single pieces, public for tests.
    void begin_trial();
    StepTrace run_step(int t, Rng& rng);
    void observe(Agent a, int t, Rng& rng, Location* perceived = nullptr);
    // G per policy (0 for masked ones). With `belief`, the literal
    // predictions are stored into belief->per_policy_states.
    std::vector<double> score_policies(Agent a, int t, const std::vector<bool>& mask,
                                       BeliefState* belief = nullptr) const;
    ExchangeMessage message_from(Agent a) const;

private:
    const MazeGraph* g_;
    DyadParams params_;
    std::array<AgentRuntime, 2> agents_;
    std::array<std::vector<double>, 2> last_g_;
};

// Cap the mode at 0.7: remaining mass rescaled to 0.3, or spread over the
// other permitted contexts when it is all zero.
Categorical carry_over_prior(const Categorical& posterior, std::span<const int> permitted);

}  // namespace jm
