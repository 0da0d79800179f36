#include <cmath>
#include <stdexcept>

#include "jointmaze/model.hpp"

namespace jm {

double salience(const MazeGraph& g, Location pos, Goal goal, double d3_mode,
                const SalienceOptions& opt) {
    if (goal == Goal::None) throw std::invalid_argument("salience needs a goal");
    const double amp = 1.0 - (d3_mode - 0.5);
    const double dr = distance(g, pos, g.red_goal, opt.metric);
    const double db = distance(g, pos, g.blue_goal, opt.metric);
    // Blue salience grows with the distance from the red goal and vice versa.
    return amp * (goal == Goal::Blue ? dr : db) / (dr + db);
}

double modulation_delta(double dv1, double dv2, bool raw) {
    constexpr double tol = 1e-12;
    if (dv1 < -tol || dv1 > 1 + tol || dv2 < -tol || dv2 > 1 + tol)
        throw std::domain_error("modulation_delta inputs must lie in [0, 1]");
    auto sig = [](double x) { return 1.0 / (1.0 + 10.0 * std::exp(-4.0 * x)); };
    const double s = sig(dv1 * dv2);
    if (raw) return s;
    return 0.75 + 0.25 * (s - sig(0.0)) / (sig(1.0) - sig(0.0));
}

namespace {
double dv(const MazeGraph& g, Location p, double mode, const SalienceOptions& opt) {
    return std::abs(salience(g, p, Goal::Blue, mode, opt) - salience(g, p, Goal::Red, mode, opt));
}
}  // namespace

double joint_delta(const MazeGraph& g, Location a, Location b, double d3_mode,
                   const SalienceOptions& opt) {
    return modulation_delta(dv(g, a, d3_mode, opt), dv(g, b, d3_mode, opt), opt.raw_delta);
}

std::array<double, 4> joint_salience_column(const MazeGraph& g, Location grey, Location white,
                                            double d3_mode, const SalienceOptions& opt) {
    // Products of the two saliences sum to amp^2; the mass the amplitude
    // removes is spread evenly, which flattens the column as beliefs sharpen.
    const double amp = 1.0 - (d3_mode - 0.5);
    const double fill = (1.0 - amp * amp) / 4.0;
    std::array<double, 4> col{};
    for (GoalContext c : kAllContexts)
        col[static_cast<int>(c)] = salience(g, white, goal_of(c, Agent::White), d3_mode, opt) *
                                       salience(g, grey, goal_of(c, Agent::Grey), d3_mode, opt) +
                                   fill;
    return col;
}

}  // namespace jm
