#include <algorithm>
#include <cmath>
#include <limits>

#include "jointmaze/experiments.hpp"

namespace jm {

namespace {

Categorical cat4(const std::array<double, 4>& a) {
    return normalize(std::vector<double>(a.begin(), a.end()));
}

double min_over(const std::vector<double>& g, Agent focal, bool want_long) {
    static const auto pols = build_policy_set(canonical_maze());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pols) {
        const RouteLabel r = p.route(focal).label;
        if (want_long ? is_long(r) : is_short(r)) best = std::min(best, g[p.index]);
    }
    return best;
}

}  // namespace

MetricsTable compute_metrics(const Records& records) {
    if (records.empty() || records.front().empty())
        throw std::invalid_argument("compute_metrics: empty records");
    MetricsTable t;
    t.focal = focal_agent(records.front().front());
    const std::size_t trials = records.front().size();
    const double n = static_cast<double>(records.size());
    for (std::size_t k = 0; k < trials; ++k) {
        TrialMetrics m;
        m.trial = static_cast<int>(k) + 1;
        std::vector<double> kl;
        for (const auto& rep : records) {
            if (rep.size() != trials) throw std::invalid_argument("compute_metrics: ragged records");
            const TrialRecord& r = rep[k];
            const int f = static_cast<int>(t.focal);
            kl.push_back(kl_divergence(cat4(r.prior[1]), cat4(r.prior[0])));
            m.success_rate += (r.outcome == Outcome::Positive) / n;
            m.epistemic_frac += (r.route_class[f] == RouteClass::Epistemic) / n;
            m.leader_entropy += entropy(cat4(r.prior[f])) / n;
            m.efe_epistemic_min += min_over(r.g_initial[f], t.focal, true) / n;
            m.efe_pragmatic_min += min_over(r.g_initial[f], t.focal, false) / n;
        }
        for (double x : kl) m.kl_mean += x / n;
        double ss = 0.0;
        for (double x : kl) ss += (x - m.kl_mean) * (x - m.kl_mean);
        m.kl_std = kl.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        m.kl_se = m.kl_std / std::sqrt(n);
        t.rows.push_back(m);
    }
    return t;
}

double window_mean(const MetricsTable& t, double TrialMetrics::*field, int first, int last) {
    double s = 0.0;
    int count = 0;
    for (const auto& r : t.rows)
        if (r.trial >= first && r.trial <= last) {
            s += r.*field;
            ++count;
        }
    if (count == 0) throw std::invalid_argument("window_mean: empty window");
    return s / count;
}

std::optional<int> pragmatic_crossing(const MetricsTable& t) {
    for (const auto& r : t.rows)
        if (r.efe_pragmatic_min < r.efe_epistemic_min) return r.trial;
    return std::nullopt;
}

std::array<std::optional<double>, 3> epistemic_by_entropy(const Records& records) {
    std::vector<std::pair<double, bool>> pts;
    for (const auto& rep : records)
        for (const auto& r : rep)
        {
            const int f = static_cast<int>(focal_agent(r));
            pts.emplace_back(entropy(cat4(r.prior[f])), r.route_class[f] == RouteClass::Epistemic);
        }
    if (pts.empty()) throw std::invalid_argument("epistemic_by_entropy: empty records");
    std::vector<double> h;
    for (const auto& p : pts) h.push_back(p.first);
    std::sort(h.begin(), h.end());
    // Linear-interpolated quantiles.
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(h.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, h.size() - 1);
        return h[lo] + (pos - static_cast<double>(lo)) * (h[hi] - h[lo]);
    };
    const double q1 = quantile(1.0 / 3.0), q2 = quantile(2.0 / 3.0);
    std::array<double, 3> hits{}, counts{};
    for (const auto& [x, e] : pts) {
        const int b = x <= q1 ? 0 : (x <= q2 ? 1 : 2);
        counts[b] += 1;
        hits[b] += e;
    }
    std::array<std::optional<double>, 3> out;
    for (int b = 0; b < 3; ++b)
        if (counts[b] > 0) out[b] = hits[b] / counts[b];
    return out;
}

}  // namespace jm
