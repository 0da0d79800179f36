#include "jointmaze/maze.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace jm {

namespace {
constexpr int kRowCols[5][5] = {
    {0, 1, 2, 3, 4}, {0, 2, 4, -1, -1}, {0, 1, 2, 3, 4}, {0, 2, 4, -1, -1}, {0, 1, 2, 3, 4}};
constexpr int kRowLen[5] = {5, 3, 5, 3, 5};
}  // namespace

std::optional<Location> MazeGraph::at(int row, int col) const {
    for (int i = 0; i < size(); ++i)
        if (coords[i].first == row && coords[i].second == col) return i;
    return std::nullopt;
}

std::string label(Location l) { return "L" + std::to_string(l + 1); }

std::optional<Location> parse_label(const std::string& s) {
    if (s.size() < 2 || s[0] != 'L') return std::nullopt;
    try {
        const int n = std::stoi(s.substr(1));
        if (n >= 1 && n <= 21 && std::to_string(n) == s.substr(1)) return n - 1;
    } catch (...) {
    }
    return std::nullopt;
}

const char* to_string(Move m) {
    switch (m) {
        case Move::Up: return "up";
        case Move::Down: return "down";
        case Move::Left: return "left";
        case Move::Right: return "right";
        case Move::Wait: return "wait";
    }
    return "?";
}

std::optional<Move> parse_move(const std::string& s) {
    for (Move m : kAllMoves)
        if (s == to_string(m)) return m;
    return std::nullopt;
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Negative: return "negative";
        case Outcome::Neutral: return "neutral";
        case Outcome::Positive: return "positive";
    }
    return "?";
}

const char* to_string(Goal g) {
    switch (g) {
        case Goal::Red: return "red";
        case Goal::Blue: return "blue";
        case Goal::None: return "none";
    }
    return "?";
}

const char* to_string(Role r) { return r == Role::Leader ? "leader" : "follower"; }
const char* to_string(Agent a) { return a == Agent::Grey ? "grey" : "white"; }

MazeGraph canonical_maze() {
    MazeGraph g;
    for (int r = 0; r < 5; ++r)
        for (int k = 0; k < kRowLen[r]; ++k) g.coords.emplace_back(r, kRowCols[r][k]);
    g.adjacency.resize(g.coords.size());
    for (int a = 0; a < g.size(); ++a)
        for (int b = 0; b < g.size(); ++b) {
            const int dr = std::abs(g.coords[a].first - g.coords[b].first);
            const int dc = std::abs(g.coords[a].second - g.coords[b].second);
            if (dr + dc == 1) g.adjacency[a].push_back(b);
        }
    return g;
}

Location apply_move(const MazeGraph& g, Location pos, Move m) {
    auto [r, c] = g.coords.at(pos);
    switch (m) {
        case Move::Up: --r; break;
        case Move::Down: ++r; break;
        case Move::Left: --c; break;
        case Move::Right: ++c; break;
        case Move::Wait: return pos;
    }
    const auto dest = g.at(r, c);
    if (!dest) return pos;
    const auto& nb = g.neighbors(pos);
    return std::find(nb.begin(), nb.end(), *dest) != nb.end() ? *dest : pos;
}

double distance(const MazeGraph& g, Location a, Location b, DistanceMetric metric) {
    if (metric == DistanceMetric::Euclidean) {
        const double dr = g.coords.at(a).first - g.coords.at(b).first;
        const double dc = g.coords.at(a).second - g.coords.at(b).second;
        return std::hypot(dr, dc);
    }
    std::vector<int> d(g.size(), -1);
    std::queue<Location> q;
    d.at(a) = 0;
    q.push(a);
    while (!q.empty()) {
        const Location u = q.front();
        q.pop();
        for (Location v : g.neighbors(u))
            if (d[v] < 0) {
                d[v] = d[u] + 1;
                q.push(v);
            }
    }
    if (d.at(b) < 0) throw std::invalid_argument("distance: disconnected cells");
    return d[b];
}

Positions env_step(const MazeGraph& g, const Positions& pos, const JointAction& u) {
    return {apply_move(g, pos[0], u.grey), apply_move(g, pos[1], u.white)};
}

Outcome trial_outcome(const MazeGraph& g, const Positions& pos, Role role, Goal true_goal) {
    const bool a = g.is_goal(pos[0]), b = g.is_goal(pos[1]);
    if (role == Role::Follower) {
        if (a && b) return pos[0] == pos[1] ? Outcome::Positive : Outcome::Negative;
        return (a || b) ? Outcome::Negative : Outcome::Neutral;
    }
    if (true_goal == Goal::None) throw std::invalid_argument("leader outcome requires a true goal");
    const Location target = g.goal_cell(true_goal);
    if (pos[0] == target && pos[1] == target) return Outcome::Positive;
    if ((a && pos[0] != target) || (b && pos[1] != target)) return Outcome::Negative;
    // Neither at a goal, or one at the true goal with the other elsewhere.
    return Outcome::Neutral;
}

bool is_walk(const MazeGraph& g, const std::vector<Location>& path) {
    for (std::size_t i = 1; i < path.size(); ++i) {
        const auto& nb = g.neighbors(path[i - 1]);
        if (std::find(nb.begin(), nb.end(), path[i]) == nb.end()) return false;
    }
    return true;
}

nlohmann::json maze_to_json(const MazeGraph& g) {
    nlohmann::json locs = nlohmann::json::array(), edges = nlohmann::json::array();
    for (int i = 0; i < g.size(); ++i) {
        locs.push_back({{"label", label(i)}, {"row", g.coords[i].first}, {"col", g.coords[i].second}});
        for (Location j : g.neighbors(i))
            if (j > i) edges.push_back({label(i), label(j)});
    }
    return {{"locations", locs},
            {"edges", edges},
            {"goals", {{"red", label(g.red_goal)}, {"blue", label(g.blue_goal)}}},
            {"starts", {{"grey", label(g.grey_start)}, {"white", label(g.white_start)}}}};
}

}  // namespace jm
