#include <cstdio>
#include <fstream>

#include "jointmaze/experiments.hpp"

namespace jm {

using nlohmann::json;
namespace fs = std::filesystem;

void write_metrics_csv(const MetricsTable& t, std::ostream& os) {
    os << "trial,kl_mean,kl_std,kl_se,success_rate,epistemic_frac,leader_entropy,"
          "efe_epistemic_min,efe_pragmatic_min\n";
    char buf[64];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.10g", x);
        return std::string(buf);
    };
    for (const auto& r : t.rows)
        os << r.trial << ',' << num(r.kl_mean) << ',' << num(r.kl_std) << ',' << num(r.kl_se) << ','
           << num(r.success_rate) << ',' << num(r.epistemic_frac) << ',' << num(r.leader_entropy) << ','
           << num(r.efe_epistemic_min) << ',' << num(r.efe_pragmatic_min) << '\n';
}

namespace {

json per_agent(const auto& pair) { return {{"grey", pair[0]}, {"white", pair[1]}}; }

json positions(const Positions& p) { return {{"grey", label(p[0])}, {"white", label(p[1])}}; }

}  // namespace

json record_to_json(const TrialRecord& r) {
    json steps = json::array();
    for (const auto& s : r.steps) {
        json perceived = {{"grey", s.perceived[0] >= 0 ? json(label(s.perceived[0])) : json(nullptr)},
                          {"white", s.perceived[1] >= 0 ? json(label(s.perceived[1])) : json(nullptr)}};
        steps.push_back({{"t", s.t},
                         {"positions", positions(s.positions)},
                         {"perceived", perceived},
                         {"moves", {{"grey", to_string(s.moves[0])}, {"white", to_string(s.moves[1])}}},
                         {"policy_posterior", per_agent(s.policy_posterior)},
                         {"goal_marginal", per_agent(s.goal_marginal)},
                         {"precision", per_agent(s.precision)}});
    }
    auto opt_route = [](const std::optional<RouteLabel>& x) { return x ? json(to_string(*x)) : json("other"); };
    auto opt_ctx = [](const std::optional<GoalContext>& x) { return x ? json(to_string(*x)) : json(nullptr); };
    return {{"replication", r.replication},
            {"trial", r.trial_index},
            {"roles", {{"grey", to_string(r.roles[0])}, {"white", to_string(r.roles[1])}}},
            {"context_order", {"blue_blue", "blue_red", "red_blue", "red_red"}},
            {"prior", per_agent(r.prior)},
            {"mind_change", {{"grey", opt_ctx(r.mind_change[0])}, {"white", opt_ctx(r.mind_change[1])}}},
            {"steps", steps},
            {"final_positions", positions(r.final_positions)},
            {"outcome", to_string(r.outcome)},
            {"outcomes", {{"grey", to_string(r.outcomes[0])}, {"white", to_string(r.outcomes[1])}}},
            {"routes", {{"grey", opt_route(r.routes[0])}, {"white", opt_route(r.routes[1])}}},
            {"route_class",
             {{"grey", to_string(r.route_class[0])}, {"white", to_string(r.route_class[1])}}},
            {"posterior", per_agent(r.posterior)},
            {"g_initial", per_agent(r.g_initial)}};
}

void emit_outputs(const MetricsTable& t, const Records& records, const ExperimentConfig& cfg,
                  const fs::path& dir, bool force) {
    const fs::path files[] = {dir / "metrics.csv", dir / "trials.jsonl", dir / "config.json"};
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    if (!force)
        for (const auto& f : files)
            if (fs::exists(f))
                throw std::runtime_error(f.string() + " already exists (use --force to overwrite)");

    // Write beside the targets, then rename, so a failed run never leaves
    // half-written results in place of earlier ones.
    auto write = [&](const fs::path& target, const auto& fill) {
        const fs::path tmp = target.string() + ".tmp";
        {
            std::ofstream os(tmp, std::ios::binary);
            if (!os) throw std::runtime_error("cannot write " + tmp.string());
            fill(os);
            if (!os) throw std::runtime_error("write failed: " + tmp.string());
        }
        fs::rename(tmp, target, ec);
        if (ec) throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
    };
    write(files[0], [&](std::ostream& os) { write_metrics_csv(t, os); });
    write(files[1], [&](std::ostream& os) {
        for (const auto& rep : records)
            for (const auto& r : rep) os << record_to_json(r).dump() << '\n';
    });
    write(files[2], [&](std::ostream& os) {
        json c = config_to_json(cfg);
        c["output_dir"] = dir.string();
        c["derived_seeds"] = derive_seeds(cfg);
        os << c.dump(2) << '\n';
    });
}

}  // namespace jm
