#include <atomic>
#include <thread>

#include "jointmaze/experiments.hpp"

namespace jm {

std::vector<TrialRecord> run_replication(const ExperimentConfig& cfg, const MazeGraph& g, int rep,
                                         std::uint64_t seed) {
    Dyad dyad(g, cfg.params);
    Rng rng(seed);
    std::vector<TrialRecord> out;
    out.reserve(cfg.trials_per_run);
    for (int trial = 1; trial <= cfg.trials_per_run; ++trial) {
        std::array<std::optional<GoalContext>, 2> changed;
        for (const auto& m : cfg.mind_change_schedule) {
            if (m.trial != trial) continue;
            const GoalContext target = m.target ? *m.target : dyad.flip_target(m.agent);
            dyad.apply_mind_change(m.agent, target);
            changed[static_cast<int>(m.agent)] = target;
        }
        TrialRecord rec = dyad.run_trial(trial, rng);
        rec.replication = rep;
        rec.mind_change = changed;
        out.push_back(std::move(rec));
        dyad.carry_over(Agent::Grey);
        dyad.carry_over(Agent::White);
    }
    return out;
}

Records run_experiment(const ExperimentConfig& cfg, int workers,
                       const std::function<void(int)>& on_replication_done) {
    validate(cfg);
    const MazeGraph g = canonical_maze();
    const auto seeds = derive_seeds(cfg);
    Records records(cfg.replications);
    std::atomic<int> next{0};
    std::mutex done_mutex;
    std::exception_ptr failure;
    auto work = [&] {
        for (int r; (r = next.fetch_add(1)) < cfg.replications;) {
            try {
                records[r] = run_replication(cfg, g, r, seeds[r]);
            } catch (...) {
                std::lock_guard lock(done_mutex);
                if (!failure) failure = std::current_exception();
                next = cfg.replications;
                return;
            }
            if (on_replication_done) {
                std::lock_guard lock(done_mutex);
                on_replication_done(r);
            }
        }
    };
    const int n = std::max(1, std::min(workers, cfg.replications));
    std::vector<std::thread> pool;
    for (int i = 1; i < n; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return records;
}

}  // namespace jm
