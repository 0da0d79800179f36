// jointmaze: run the joint-maze experiments, validate configs, dump models.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "jointmaze/experiments.hpp"

namespace {

using nlohmann::json;

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> replications, trials, workers;
    std::string out, experiment;
    std::vector<std::string> sets;
    bool force = false;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config, "Experiment config (JSON)");
    cmd->add_option("--experiment", o.experiment,
                    "Experiment preset: sim1, sim2, sim1_no_interactive, sim2_no_epistemic");
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--replications", o.replications, "Number of replications");
    cmd->add_option("--trials", o.trials, "Trials per run");
    cmd->add_option("--set", o.sets, "Override any config field: key.path=JSON value (repeatable)");
}

json resolve(const Options& o) {
    json doc = json::object();
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw jm::ConfigError("config", "cannot open " + o.config);
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw jm::ConfigError("config", o.config + ": " + e.what());
        }
        if (!doc.is_object()) throw jm::ConfigError("<root>", "config must be a JSON object");
    }
    if (!o.experiment.empty()) doc["experiment"] = o.experiment;
    if (!doc.contains("experiment"))
        throw jm::ConfigError("experiment", "give --config or --experiment");
    // Expand to the full document so every field can be overridden.
    json full = jm::config_to_json(jm::config_from_json(doc));
    if (o.seed) full["seed"] = *o.seed;
    if (o.replications) full["replications"] = *o.replications;
    if (o.trials) full["trials_per_run"] = *o.trials;
    if (!o.out.empty()) full["output_dir"] = o.out;
    for (const auto& s : o.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw jm::ConfigError(s, "--set expects key.path=value");
        const std::string key = s.substr(0, eq), raw = s.substr(eq + 1);
        json value = json::parse(raw, nullptr, false);
        if (value.is_discarded()) value = raw;
        jm::set_config_value(full, key, value);
    }
    return full;
}

int default_workers() {
    if (const char* env = std::getenv("JOINTMAZE_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_run(const Options& o) {
    const auto cfg = jm::config_from_json(resolve(o));
    const int workers = o.workers.value_or(default_workers());
    int done = 0;
    const auto records = jm::run_experiment(cfg, workers, [&](int) {
        std::cerr << "\rreplication " << ++done << "/" << cfg.replications << std::flush;
    });
    std::cerr << '\n';
    const auto table = jm::compute_metrics(records);
    jm::emit_outputs(table, records, cfg, cfg.output_dir, o.force);
    std::cout << "wrote " << cfg.output_dir << "/{metrics.csv,trials.jsonl,config.json}\n";
    return 0;
}

int cmd_validate(const Options& o) {
    const auto cfg = jm::config_from_json(resolve(o));
    const auto g = jm::canonical_maze();
    if (g.size() != 21) throw std::runtime_error("maze: expected 21 locations");
    for (jm::Agent a : {jm::Agent::Grey, jm::Agent::White})
        for (jm::RouteLabel r : jm::kAllRoutes)
            if (!jm::is_walk(g, jm::route_cells(g, a, r)))
                throw std::runtime_error(std::string("maze: route ") + jm::to_string(r) + " is not a walk");
    jm::Dyad check(g, cfg.params);  // builds both models
    std::cout << "ok: " << cfg.experiment << ", " << cfg.replications << " x " << cfg.trials_per_run
              << " trials\n";
    return 0;
}

int cmd_dump(const Options& o) {
    const auto cfg = jm::config_from_json(resolve(o));
    const auto g = jm::canonical_maze();
    jm::Dyad dyad(g, cfg.params);
    json doc = {{"maze", jm::maze_to_json(g)},
                {"agents",
                 {{"grey", jm::model_to_json(dyad.agent(jm::Agent::Grey).base)},
                  {"white", jm::model_to_json(dyad.agent(jm::Agent::White).base)}}}};
    if (o.out.empty() || o.out == "-") {
        std::cout << doc.dump(2) << '\n';
    } else {
        if (std::filesystem::exists(o.out) && !o.force)
            throw std::runtime_error(o.out + " already exists (use --force to overwrite)");
        std::ofstream os(o.out);
        if (!os) throw std::runtime_error("cannot write " + o.out);
        os << doc.dump(2) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-agent active-inference joint maze simulator"};
    app.require_subcommand(1);
    Options o;

    auto* run = app.add_subcommand("run", "Run an experiment and write metrics.csv, trials.jsonl, config.json");
    add_common(run, o);
    run->add_option("--out", o.out, "Output directory");
    run->add_option("--workers", o.workers, "Worker threads (default: $JOINTMAZE_WORKERS or CPU count)");
    run->add_flag("--force", o.force, "Overwrite existing result files");

    auto* val = app.add_subcommand("validate", "Check a config and the maze without running");
    add_common(val, o);

    auto* dump = app.add_subcommand("dump-model", "Write the assembled generative models and maze as JSON");
    add_common(dump, o);
    dump->add_option("--out", o.out, "Output file (default: stdout)");
    dump->add_flag("--force", o.force, "Overwrite an existing file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(o);
        if (val->parsed()) return cmd_validate(o);
        return cmd_dump(o);
    } catch (const jm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
