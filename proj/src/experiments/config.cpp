#include <algorithm>
#include <fstream>
#include <sstream>

#include "jointmaze/experiments.hpp"

namespace jm {

using nlohmann::json;

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"sim1", "sim2", "sim1_no_interactive",
                                                "sim2_no_epistemic"};
    return names;
}

json preset_json(const std::string& experiment) {
    const bool leader = experiment == "sim2" || experiment == "sim2_no_epistemic";
    if (std::find(experiment_names().begin(), experiment_names().end(), experiment) ==
        experiment_names().end())
        throw ConfigError("experiment", "unknown experiment '" + experiment + "'");
    json schedule = json::array();
    if (!leader)
        for (int t : {25, 50, 75}) schedule.push_back({{"trial", t}, {"agent", "white"}, {"context", "flip"}});
    return {
        {"experiment", experiment},
        {"trials_per_run", leader ? 30 : 100},
        {"replications", 100},
        {"seed", 42},
        {"roles", {{"grey", "follower"}, {"white", leader ? "leader" : "follower"}}},
        {"true_goal", leader ? "red" : "none"},
        {"mind_change_schedule", schedule},
        {"engine",
         {{"uniform_a3", experiment == "sim1_no_interactive"},
          {"drop_epistemic", experiment == "sim2_no_epistemic"},
          {"distance", "euclidean"},
          {"delta_mode", "rescaled"},
          {"position_terms_in_efe", false}}},
        {"model",
         {{"c4_magnitude", 6.0},
          {"alpha", leader ? 60.0 : 25.0},
          {"beta", 1.0},
          {"preference_mix", 0.2}}},
        {"perception",
         {{"noise", true},
          {"evidence_floor", 0.25},
          {"reliability_discount", true},
          {"leader_signal_exponent", 0.01}}},
        {"output_dir", "results/" + experiment},
    };
}

namespace {

void check_keys(const json& given, const json& schema, const std::string& path) {
    if (!given.is_object()) return;
    for (const auto& [k, v] : given.items()) {
        const std::string p = path.empty() ? k : path + "." + k;
        if (!schema.contains(k)) throw ConfigError(p, "unknown key");
        if (schema[k].is_object()) {
            if (!v.is_object()) throw ConfigError(p, "expected an object");
            check_keys(v, schema[k], p);
        }
    }
}

template <class T>
T get(const json& doc, const std::string& dotted) {
    const json* cur = &doc;
    std::stringstream ss(dotted);
    std::string part;
    while (std::getline(ss, part, '.')) {
        if (!cur->is_object() || !cur->contains(part)) throw ConfigError(dotted, "missing");
        cur = &(*cur)[part];
    }
    try {
        return cur->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(dotted, "wrong type");
    }
}

Role parse_role(const std::string& s, const std::string& field) {
    if (s == "leader") return Role::Leader;
    if (s == "follower") return Role::Follower;
    throw ConfigError(field, "expected 'leader' or 'follower'");
}

Goal parse_goal(const std::string& s, const std::string& field) {
    if (s == "red") return Goal::Red;
    if (s == "blue") return Goal::Blue;
    if (s == "none") return Goal::None;
    throw ConfigError(field, "expected 'red', 'blue' or 'none'");
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    if (!doc.contains("experiment")) throw ConfigError("experiment", "missing");
    if (!doc["experiment"].is_string()) throw ConfigError("experiment", "wrong type");
    json full = preset_json(doc["experiment"].get<std::string>());
    check_keys(doc, full, "");
    full.merge_patch(doc);

    ExperimentConfig c;
    c.experiment = get<std::string>(full, "experiment");
    c.trials_per_run = get<int>(full, "trials_per_run");
    c.replications = get<int>(full, "replications");
    if (!full["seed"].is_number_integer() || full["seed"].get<long long>() < 0)
        throw ConfigError("seed", "expected a non-negative integer");
    c.seed = full["seed"].get<std::uint64_t>();
    c.roles = {parse_role(get<std::string>(full, "roles.grey"), "roles.grey"),
               parse_role(get<std::string>(full, "roles.white"), "roles.white")};
    c.true_goal = parse_goal(get<std::string>(full, "true_goal"), "true_goal");
    if (!full["mind_change_schedule"].is_array())
        throw ConfigError("mind_change_schedule", "expected an array");
    int i = 0;
    for (const auto& e : full["mind_change_schedule"]) {
        const std::string f = "mind_change_schedule[" + std::to_string(i++) + "]";
        if (!e.is_object()) throw ConfigError(f, "expected an object");
        for (const auto& [k, v] : e.items())
            if (k != "trial" && k != "agent" && k != "context") throw ConfigError(f + "." + k, "unknown key");
        MindChange m;
        if (!e.contains("trial") || !e["trial"].is_number_integer()) throw ConfigError(f + ".trial", "expected an integer");
        m.trial = e["trial"].get<int>();
        const std::string agent = e.value("agent", "");
        if (agent == "grey") m.agent = Agent::Grey;
        else if (agent == "white") m.agent = Agent::White;
        else throw ConfigError(f + ".agent", "expected 'grey' or 'white'");
        const std::string ctx = e.value("context", "flip");
        if (ctx != "flip") {
            m.target = parse_context(ctx);
            if (!m.target) throw ConfigError(f + ".context", "expected 'flip' or a goal context name");
        }
        c.mind_change_schedule.push_back(m);
    }

    auto& p = c.params;
    p.roles = c.roles;
    p.true_goal = c.true_goal;
    p.controls.uniform_a3 = get<bool>(full, "engine.uniform_a3");
    p.drop_epistemic = get<bool>(full, "engine.drop_epistemic");
    const auto dist = get<std::string>(full, "engine.distance");
    if (dist == "euclidean") p.controls.salience.metric = DistanceMetric::Euclidean;
    else if (dist == "shortest_path") p.controls.salience.metric = DistanceMetric::ShortestPath;
    else throw ConfigError("engine.distance", "expected 'euclidean' or 'shortest_path'");
    const auto dm = get<std::string>(full, "engine.delta_mode");
    if (dm != "rescaled" && dm != "raw") throw ConfigError("engine.delta_mode", "expected 'rescaled' or 'raw'");
    p.controls.salience.raw_delta = dm == "raw";
    p.position_terms_in_efe = get<bool>(full, "engine.position_terms_in_efe");
    p.controls.c4_magnitude = get<double>(full, "model.c4_magnitude");
    p.controls.alpha = get<double>(full, "model.alpha");
    p.controls.beta = get<double>(full, "model.beta");
    p.preference_mix = get<double>(full, "model.preference_mix");
    p.perception_noise = get<bool>(full, "perception.noise");
    p.evidence_floor = get<double>(full, "perception.evidence_floor");
    p.reliability_discount = get<bool>(full, "perception.reliability_discount");
    p.leader_signal_exponent = get<double>(full, "perception.leader_signal_exponent");
    c.output_dir = get<std::string>(full, "output_dir");
    validate(c);
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json sched = json::array();
    for (const auto& m : c.mind_change_schedule)
        sched.push_back({{"trial", m.trial},
                         {"agent", to_string(m.agent)},
                         {"context", m.target ? to_string(*m.target) : "flip"}});
    const auto& p = c.params;
    return {
        {"experiment", c.experiment},
        {"trials_per_run", c.trials_per_run},
        {"replications", c.replications},
        {"seed", c.seed},
        {"roles", {{"grey", to_string(c.roles[0])}, {"white", to_string(c.roles[1])}}},
        {"true_goal", to_string(c.true_goal)},
        {"mind_change_schedule", sched},
        {"engine",
         {{"uniform_a3", p.controls.uniform_a3},
          {"drop_epistemic", p.drop_epistemic},
          {"distance", p.controls.salience.metric == DistanceMetric::Euclidean ? "euclidean" : "shortest_path"},
          {"delta_mode", p.controls.salience.raw_delta ? "raw" : "rescaled"},
          {"position_terms_in_efe", p.position_terms_in_efe}}},
        {"model",
         {{"c4_magnitude", p.controls.c4_magnitude},
          {"alpha", p.controls.alpha},
          {"beta", p.controls.beta},
          {"preference_mix", p.preference_mix}}},
        {"perception",
         {{"noise", p.perception_noise},
          {"evidence_floor", p.evidence_floor},
          {"reliability_discount", p.reliability_discount},
          {"leader_signal_exponent", p.leader_signal_exponent}}},
        {"output_dir", c.output_dir},
    };
}

void validate(const ExperimentConfig& c) {
    if (c.trials_per_run < 1) throw ConfigError("trials_per_run", "must be >= 1");
    if (c.replications < 1) throw ConfigError("replications", "must be >= 1");
    const auto& p = c.params;
    if (!(p.controls.alpha > 0)) throw ConfigError("model.alpha", "must be > 0");
    if (!(p.controls.beta > 0)) throw ConfigError("model.beta", "must be > 0");
    if (!(p.controls.c4_magnitude >= 0)) throw ConfigError("model.c4_magnitude", "must be >= 0");
    if (!(p.preference_mix >= 0 && p.preference_mix <= 1))
        throw ConfigError("model.preference_mix", "must lie in [0, 1]");
    if (!(p.evidence_floor >= 0)) throw ConfigError("perception.evidence_floor", "must be >= 0");
    if (!(p.leader_signal_exponent >= 0 && p.leader_signal_exponent <= 1))
        throw ConfigError("perception.leader_signal_exponent", "must lie in [0, 1]");
    const bool any_leader = c.roles[0] == Role::Leader || c.roles[1] == Role::Leader;
    if (any_leader && c.true_goal == Goal::None)
        throw ConfigError("true_goal", "a leader needs a true goal ('red' or 'blue')");
    for (std::size_t i = 0; i < c.mind_change_schedule.size(); ++i) {
        const auto& m = c.mind_change_schedule[i];
        const std::string f = "mind_change_schedule[" + std::to_string(i) + "]";
        if (m.trial < 1 || m.trial > c.trials_per_run)
            throw ConfigError(f + ".trial", "outside 1.." + std::to_string(c.trials_per_run));
        const Role role = c.roles[static_cast<int>(m.agent)];
        const auto allowed = permitted_contexts(role, m.agent, c.true_goal);
        if (!m.target && role == Role::Leader)
            throw ConfigError(f + ".context", "'flip' would leave the leader's permitted contexts");
        if (m.target && std::find(allowed.begin(), allowed.end(), static_cast<int>(*m.target)) == allowed.end())
            throw ConfigError(f + ".context", "context not permitted for this agent's role");
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", path.string() + ": " + e.what());
    }
    return config_from_json(doc);
}

void set_config_value(json& doc, const std::string& dotted, const json& value) {
    json* cur = &doc;
    std::stringstream ss(dotted);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    if (parts.empty()) throw ConfigError(dotted, "empty key");
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (!cur->is_object() || !cur->contains(parts[i])) throw ConfigError(dotted, "unknown key");
        cur = &(*cur)[parts[i]];
    }
    *cur = value;
}

std::vector<std::uint64_t> derive_seeds(const ExperimentConfig& cfg) {
    std::vector<std::uint64_t> s(cfg.replications);
    for (int r = 0; r < cfg.replications; ++r) s[r] = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
    return s;
}

}  // namespace jm
