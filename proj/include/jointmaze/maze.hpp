#pragma once
// The joint maze: 21 cells on a 5/3/5/3/5 cross, two goals, two starts.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace jm {

using Location = int;  // 0-based; label is "L" + (index + 1)

enum class Move { Up, Down, Left, Right, Wait };
inline constexpr std::array<Move, 5> kAllMoves{Move::Up, Move::Down, Move::Left, Move::Right,
                                               Move::Wait};

enum class Agent { Grey = 0, White = 1 };
inline Agent other(Agent a) { return a == Agent::Grey ? Agent::White : Agent::Grey; }

enum class Goal { Red, Blue, None };
enum class Role { Leader, Follower };
enum class Outcome { Negative = 0, Neutral = 1, Positive = 2 };
enum class DistanceMetric { Euclidean, ShortestPath };

struct JointAction {
    Move grey = Move::Wait;
    Move white = Move::Wait;
};

// Index by Agent: [grey, white].
using Positions = std::array<Location, 2>;

struct MazeGraph {
    std::vector<std::pair<int, int>> coords;  // (row, col) per location
    std::vector<std::vector<Location>> adjacency;
    Location red_goal = 9;
    Location blue_goal = 11;
    Location grey_start = 2;
    Location white_start = 18;

    int size() const { return static_cast<int>(coords.size()); }
    std::optional<Location> at(int row, int col) const;
    const std::vector<Location>& neighbors(Location l) const { return adjacency.at(l); }
    Location goal_cell(Goal g) const { return g == Goal::Red ? red_goal : blue_goal; }
    bool is_goal(Location l) const { return l == red_goal || l == blue_goal; }
    Location start(Agent a) const { return a == Agent::Grey ? grey_start : white_start; }
};

std::string label(Location l);
std::optional<Location> parse_label(const std::string& s);
const char* to_string(Move m);
std::optional<Move> parse_move(const std::string& s);
const char* to_string(Outcome o);
const char* to_string(Goal g);
const char* to_string(Role r);
const char* to_string(Agent a);

MazeGraph canonical_maze();
Location apply_move(const MazeGraph& g, Location pos, Move m);
double distance(const MazeGraph& g, Location a, Location b,
                DistanceMetric metric = DistanceMetric::Euclidean);
Positions env_step(const MazeGraph& g, const Positions& pos, const JointAction& u);

// Leader rule needs true_goal != None (std::invalid_argument otherwise).
// Grey/white order matches Positions.
Outcome trial_outcome(const MazeGraph& g, const Positions& pos, Role role, Goal true_goal);

// Walk validation: every consecutive pair is an edge.
bool is_walk(const MazeGraph& g, const std::vector<Location>& path);

nlohmann::json maze_to_json(const MazeGraph& g);

}  // namespace jm
