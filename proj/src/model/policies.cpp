#include <algorithm>
#include <stdexcept>

#include "jointmaze/model.hpp"

namespace jm {

namespace {
// 1-based cell labels of each route, start included.
const std::vector<int>& route_labels(Agent a, RouteLabel r) {
    static const std::vector<int> grey[5] = {
        {3, 7, 11, 10}, {3, 7, 11, 12}, {3, 2, 1, 6, 9, 10}, {3, 4, 5, 8, 13, 12}, {3}};
    static const std::vector<int> white[5] = {
        {19, 15, 11, 10}, {19, 15, 11, 12}, {19, 18, 17, 14, 9, 10}, {19, 20, 21, 16, 13, 12}, {19}};
    return (a == Agent::Grey ? grey : white)[static_cast<int>(r)];
}
}  // namespace

const char* to_string(RouteLabel r) {
    switch (r) {
        case RouteLabel::ShortRed: return "short_red";
        case RouteLabel::ShortBlue: return "short_blue";
        case RouteLabel::LongRed: return "long_red";
        case RouteLabel::LongBlue: return "long_blue";
        case RouteLabel::Stay: return "stay";
    }
    return "?";
}

bool is_long(RouteLabel r) { return r == RouteLabel::LongRed || r == RouteLabel::LongBlue; }
bool is_short(RouteLabel r) { return r == RouteLabel::ShortRed || r == RouteLabel::ShortBlue; }

Goal route_goal(RouteLabel r) {
    switch (r) {
        case RouteLabel::ShortRed:
        case RouteLabel::LongRed: return Goal::Red;
        case RouteLabel::ShortBlue:
        case RouteLabel::LongBlue: return Goal::Blue;
        case RouteLabel::Stay: return Goal::None;
    }
    return Goal::None;
}

RouteLabel make_route(bool long_route, Goal colour) {
    if (colour == Goal::None) return RouteLabel::Stay;
    if (long_route) return colour == Goal::Red ? RouteLabel::LongRed : RouteLabel::LongBlue;
    return colour == Goal::Red ? RouteLabel::ShortRed : RouteLabel::ShortBlue;
}

std::vector<Location> route_cells(const MazeGraph& g, Agent a, RouteLabel r) {
    (void)g;
    std::vector<Location> out;
    for (int l : route_labels(a, r)) out.push_back(l - 1);
    return out;
}

RoutePolicy make_route_policy(const MazeGraph& g, Agent a, RouteLabel r) {
    RoutePolicy p{a, r, {}};
    p.moves.fill(Move::Wait);
    const auto cells = route_cells(g, a, r);
    for (std::size_t i = 1; i < cells.size(); ++i) {
        bool found = false;
        for (Move m : kAllMoves) {
            if (m != Move::Wait && apply_move(g, cells[i - 1], m) == cells[i]) {
                p.moves[i - 1] = m;
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("route is not a walk in this maze");
    }
    return p;
}

std::vector<JointPolicy> build_policy_set(const MazeGraph& g) {
    std::vector<JointPolicy> out;
    for (RouteLabel gr : kAllRoutes)
        for (RouteLabel wr : kAllRoutes)
            out.push_back({make_route_policy(g, Agent::Grey, gr), make_route_policy(g, Agent::White, wr),
                           static_cast<int>(out.size())});
    return out;
}

std::optional<int> commit_step(const MazeGraph& g, Agent a, RouteLabel r) {
    if (r == RouteLabel::Stay) return std::nullopt;
    const Goal twin_colour = route_goal(r) == Goal::Red ? Goal::Blue : Goal::Red;
    const auto x = make_route_policy(g, a, r);
    const auto y = make_route_policy(g, a, make_route(is_long(r), twin_colour));
    for (int i = 0; i < kHorizon; ++i)
        if (x.moves[i] != y.moves[i]) return i;
    return std::nullopt;
}

bool legible(const MazeGraph& g, Agent a, RouteLabel own, std::optional<int> step) {
    if (!step || own == RouteLabel::Stay) return false;
    const auto mine = make_route_policy(g, a, own);
    for (RouteLabel r : kAllRoutes) {
        if (r == RouteLabel::Stay || route_goal(r) == route_goal(own)) continue;
        const auto other = make_route_policy(g, a, r);
        if (std::equal(mine.moves.begin(), mine.moves.begin() + *step, other.moves.begin()))
            return false;
    }
    return true;
}

std::vector<PartnerOption> partner_response(const MazeGraph& g, Agent self, RouteLabel own,
                                            RouteLabel partner, const Categorical& q,
                                            Goal true_goal) {
    if (partner == RouteLabel::Stay) return {{1.0, RouteLabel::Stay}};
    const bool long_route = is_long(partner);
    if (legible(g, self, own, commit_step(g, other(self), partner)))
        return {{1.0, make_route(long_route, route_goal(own))}};
    double num = 0.0, den = 0.0;
    for (GoalContext c : kAllContexts) {
        if (goal_of(c, self) != true_goal) continue;
        den += q[static_cast<int>(c)];
        if (goal_of(c, other(self)) == Goal::Red) num += q[static_cast<int>(c)];
    }
    const double pr = den > 1e-12 ? num / den : 0.5;
    return {{pr, make_route(long_route, Goal::Red)}, {1.0 - pr, make_route(long_route, Goal::Blue)}};
}

}  // namespace jm
