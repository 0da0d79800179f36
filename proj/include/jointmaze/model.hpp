#pragma once
// Per-agent generative model: likelihoods A1..A4, transitions B,
// preferences, priors and the 25 joint route policies.
//
// Hidden states are flattened row-major over (own position, other position,
// goal context): 21 x 21 x 4 = 1764.

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "jointmaze/maze.hpp"
#include "jointmaze/tensor.hpp"

namespace jm {

inline constexpr int kHorizon = 5;
inline constexpr int kCells = 21;
inline constexpr int kContexts = 4;
inline constexpr int kStates = kCells * kCells * kContexts;
inline constexpr int kPolicies = 25;
inline constexpr int kOutcomes = 3;

// Slot order (white's goal, grey's goal).
enum class GoalContext { BlueBlue = 0, BlueRed = 1, RedBlue = 2, RedRed = 3 };
inline constexpr std::array<GoalContext, 4> kAllContexts{
    GoalContext::BlueBlue, GoalContext::BlueRed, GoalContext::RedBlue, GoalContext::RedRed};

Goal goal_of(GoalContext c, Agent a);
GoalContext make_context(Goal white, Goal grey);
const char* to_string(GoalContext c);
std::optional<GoalContext> parse_context(const std::string& s);

enum class RouteLabel { ShortRed = 0, ShortBlue = 1, LongRed = 2, LongBlue = 3, Stay = 4 };
inline constexpr std::array<RouteLabel, 5> kAllRoutes{RouteLabel::ShortRed, RouteLabel::ShortBlue,
                                                      RouteLabel::LongRed, RouteLabel::LongBlue,
                                                      RouteLabel::Stay};
const char* to_string(RouteLabel r);
bool is_long(RouteLabel r);
bool is_short(RouteLabel r);
Goal route_goal(RouteLabel r);
RouteLabel make_route(bool long_route, Goal colour);

struct RoutePolicy {
    Agent agent = Agent::Grey;
    RouteLabel label = RouteLabel::Stay;
    std::array<Move, kHorizon> moves{};
};

struct JointPolicy {
    RoutePolicy grey, white;
    int index = 0;
    const RoutePolicy& route(Agent a) const { return a == Agent::Grey ? grey : white; }
};

// Cells visited by each agent's route, start included.
std::vector<Location> route_cells(const MazeGraph& g, Agent a, RouteLabel r);
RoutePolicy make_route_policy(const MazeGraph& g, Agent a, RouteLabel r);
// Index = grey route * 5 + white route.
std::vector<JointPolicy> build_policy_set(const MazeGraph& g);

struct SalienceOptions {
    DistanceMetric metric = DistanceMetric::Euclidean;
    bool raw_delta = false;  // skip the affine rescale onto [0.75, 1]
};

double salience(const MazeGraph& g, Location pos, Goal goal, double d3_mode,
                const SalienceOptions& opt = {});
double modulation_delta(double dv1, double dv2, bool raw = false);
// Delta for one joint position (order-free) at the given belief mode.
double joint_delta(const MazeGraph& g, Location a, Location b, double d3_mode,
                   const SalienceOptions& opt = {});
// Context column over the four goal contexts for a (grey, white) placement.
std::array<double, 4> joint_salience_column(const MazeGraph& g, Location grey, Location white,
                                            double d3_mode, const SalienceOptions& opt = {});

std::size_t state_index(Location own, Location other, int ctx);
// Maps an agent's (own, other) to (grey, white).
Positions to_positions(Agent self, Location own, Location other);

struct PositionLikelihoods {
    Matrix A1, A2;  // 21 x 1764 each
};
PositionLikelihoods build_position_likelihoods(const MazeGraph& g, Agent self,
                                               const Categorical& d3,
                                               const SalienceOptions& opt = {});
Matrix build_joint_salience(const MazeGraph& g, Agent self, double d3_mode, bool uniform,
                            const SalienceOptions& opt = {});
Matrix build_outcome_likelihood(const MazeGraph& g, Agent self, Role role, Goal true_goal);
// 25 deterministic maps indexed by grey move * 5 + white move.
std::vector<Transition> build_transitions(const MazeGraph& g, Agent self);
int joint_action_index(const JointAction& u);

Categorical default_d3(Role role, Agent self, Goal true_goal);
// Contexts the role's prior may put mass on.
std::vector<int> permitted_contexts(Role role, Agent self, Goal true_goal);
Categorical outcome_preference(double magnitude);

struct ModelControls {
    bool uniform_a3 = false;
    double c4_magnitude = 3.0;
    double alpha = 1.0;
    double beta = 1.0;
    SalienceOptions salience;
};

struct GenerativeModel {
    Agent self = Agent::Grey;
    Role role = Role::Follower;
    Goal true_goal = Goal::None;
    ModelControls controls;
    double d3_mode = 0.5;

    Matrix A1, A2, A3, A4;
    std::shared_ptr<const std::vector<Transition>> B;
    Categorical C1, C2, C3, C4;
    Categorical D1, D2, D3;
    Categorical E;
    double alpha = 1.0, beta = 1.0;
    std::vector<JointPolicy> policies;
    int horizon = kHorizon;

    // Initial flat-state prior D1 x D2 x D3.
    Categorical initial_state() const;
};

// Throws std::invalid_argument on inconsistent role / goal / prior.
GenerativeModel assemble_model(const MazeGraph& g, Agent self, Role role, Goal true_goal,
                               const Categorical& d3, const ModelControls& controls);

// Same model with a new goal-context prior: only the belief-dependent
// tensors (A2, A3) are rebuilt; B is shared.
GenerativeModel with_prior(const GenerativeModel& base, const MazeGraph& g, const Categorical& d3);

nlohmann::json model_to_json(const GenerativeModel& m);

// The leader's prediction of how its partner will respond to a joint
// policy: weighted partner routes. The partner commits at its route's
// branching step; if the leader's own moves before that step already single
// out its goal, the partner follows the leader's colour, otherwise it picks
// a colour from the leader's belief about the partner's goal.
struct PartnerOption {
    double weight;
    RouteLabel route;
};
std::vector<PartnerOption> partner_response(const MazeGraph& g, Agent self, RouteLabel own,
                                            RouteLabel partner, const Categorical& q,
                                            Goal true_goal);
// First step at which a route departs from its opposite-colour twin.
std::optional<int> commit_step(const MazeGraph& g, Agent a, RouteLabel r);
bool legible(const MazeGraph& g, Agent a, RouteLabel own, std::optional<int> step);

}  // namespace jm
