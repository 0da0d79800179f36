#pragma once
// Experiment configuration, replicated runs, per-trial metrics and the
// result files (metrics.csv, trials.jsonl, config.json).

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "jointmaze/dyad.hpp"

namespace jm {

// Thrown for invalid configurations; `field` names the offending key path.
struct ConfigError : std::runtime_error {
    ConfigError(std::string field, const std::string& msg)
        : std::runtime_error(field + ": " + msg), field(std::move(field)) {}
    std::string field;
};

struct MindChange {
    int trial = 1;  // 1-based
    Agent agent = Agent::White;
    std::optional<GoalContext> target;  // nullopt = flip the current mode
};

struct ExperimentConfig {
    std::string experiment = "sim1";
    int trials_per_run = 100;
    int replications = 100;
    std::uint64_t seed = 42;
    std::array<Role, 2> roles{Role::Follower, Role::Follower};
    Goal true_goal = Goal::None;
    std::vector<MindChange> mind_change_schedule;
    DyadParams params;  // roles / true_goal mirrored from above
    std::string output_dir = "results";
};

const std::vector<std::string>& experiment_names();
// Full default configuration of a named experiment, as JSON.
nlohmann::json preset_json(const std::string& experiment);
// Preset of doc["experiment"] overlaid with doc. Unknown keys, wrong types
// and invalid values throw ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
void validate(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);
// Sets a dotted key path (e.g. "model.alpha") on a config document. The
// path must already exist.
void set_config_value(nlohmann::json& doc, const std::string& dotted, const nlohmann::json& value);

std::vector<std::uint64_t> derive_seeds(const ExperimentConfig& cfg);

using Records = std::vector<std::vector<TrialRecord>>;  // [replication][trial]

// Replications run on `workers` threads; results do not depend on it.
Records run_experiment(const ExperimentConfig& cfg, int workers = 1,
                       const std::function<void(int)>& on_replication_done = {});
// One replication, exposed for tests.
std::vector<TrialRecord> run_replication(const ExperimentConfig& cfg, const MazeGraph& g, int rep,
                                         std::uint64_t seed);

struct TrialMetrics {
    int trial = 0;
    double kl_mean = 0, kl_std = 0, kl_se = 0;
    double success_rate = 0;
    double epistemic_frac = 0;
    double leader_entropy = 0;
    double efe_epistemic_min = 0, efe_pragmatic_min = 0;
};

struct MetricsTable {
    std::vector<TrialMetrics> rows;
    // Focal agent for the leader columns: the leader, else white.
    Agent focal = Agent::White;
};

// Throws std::invalid_argument on empty input.
MetricsTable compute_metrics(const Records& records);

// Helpers for the figure-level checks.
double window_mean(const MetricsTable& t, double TrialMetrics::*field, int first, int last);
// First trial (1-based) where the best pragmatic G drops below the best
// epistemic G, if any.
std::optional<int> pragmatic_crossing(const MetricsTable& t);
// Epistemic frequency in three focal-entropy bins (terciles), low to high
// entropy. Empty bins are nullopt.
std::array<std::optional<double>, 3> epistemic_by_entropy(const Records& records);

void write_metrics_csv(const MetricsTable& t, std::ostream& os);
nlohmann::json record_to_json(const TrialRecord& r);
// Writes the three result files; refuses to overwrite unless force.
void emit_outputs(const MetricsTable& t, const Records& records, const ExperimentConfig& cfg,
                  const std::filesystem::path& dir, bool force);

}  // namespace jm
