#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "hrlnav/hierarchy.hpp"
#include "hrlnav/metrics.hpp"

namespace hrlnav::hier {

/// Who learns and who drives the subgoal choice.
///   Flat        - no hierarchy: the motion policy is trained directly on
///                 the goal.
///   Joint       - subgoal and motion learners update together.
///   Alternating - motion pretrain on random subgoals, then subgoal
///                 learning with the motion policy frozen, then a joint
///                 fine-tune phase.
///   FrozenHigh  - subgoals sampled uniformly at random and never learned;
///                 the motion policy trains (the random-subgoal ablation).
///   FrozenLow   - motion policy frozen (parameters untouched); the
///                 subgoal learner trains on top of it.
enum class TrainingMode { Flat, Joint, Alternating, FrozenHigh, FrozenLow };

const char* training_mode_name(TrainingMode m);
TrainingMode training_mode_from_name(const std::string& name);  // ConfigError on unknown

struct TrainParams {
    TrainingMode mode = TrainingMode::Alternating;
    int episodes = 1000;
    int update_period = 100;      // environment steps between learner-update triggers
    int grad_steps = 100;         // gradient steps per trigger
    int warmup_env_steps = 2000;  // random motion actions before the first critic update
    size_t low_capacity = 100000;
    size_t high_capacity = 20000;
    int low_batch = 64;
    int high_batch = 32;
    double phase_pretrain_frac = 0.45;  // Alternating: motion-pretrain share of episodes
    double phase_subgoal_frac = 0.35;   // Alternating: frozen-motion subgoal share

    void validate() const;  // ConfigError
};

/// One CSV-log row worth of episode results. Fields that do not apply to
/// the mode (or had no learner updates yet) stay empty.
struct EpisodeStats {
    int episode = 0;
    int steps = 0;
    sim::Outcome outcome = sim::Outcome::Running;
    double reward_low = 0.0;
    std::optional<double> reward_high;
    std::optional<double> loss_q;      // subgoal TD loss, mean over the episode's updates
    std::optional<double> loss_c1;
    std::optional<double> loss_c2;
    std::optional<double> loss_actor;
    std::optional<double> epsilon;
    double wall_ms = 0.0;  // measured, not reproducible; logged out-of-band
};

using EpisodeCallback = std::function<void(const EpisodeStats&)>;

/// Single-threaded training loop owning the environment, both agents, the
/// replay buffers and all random streams. Fixed seed implies a bit-identical
/// run; a checkpoint taken between episodes resumes the exact trajectory.
class Trainer {
public:
    Trainer(sim::World world, sim::SimConfig sim_cfg, HierarchyConfig hier_cfg,
            agents::DqnConfig dqn_cfg, agents::Td3Config td3_cfg,
            rewards::HighRewardWeights high_weights, rewards::LowRewardWeights low_weights,
            TrainParams params, uint64_t seed);

    /// Run the remaining budget, invoking the callback once per episode.
    void run(const EpisodeCallback& cb);

    /// Run at most n more episodes (clipped to the budget).
    void run_episodes(int n, const EpisodeCallback& cb);

    int episodes_done() const { return episodes_done_; }
    int64_t env_steps() const { return env_steps_; }
    int64_t update_triggers() const { return update_triggers_; }
    const TrainParams& params() const { return params_; }
    const agents::Td3Agent& td3() const { return td3_; }
    agents::Td3Agent& td3() { return td3_; }
    const agents::DqnAgent* dqn() const { return dqn_ ? &*dqn_ : nullptr; }
    agents::DqnAgent* dqn() { return dqn_ ? &*dqn_ : nullptr; }
    const agents::ObsScaler& scaler() const { return scaler_; }
    const sim::Environment& env() const { return env_; }
    const HierarchyConfig& hier_config() const { return hier_cfg_; }

    /// Greedy evaluation with the current (frozen) policies on a fresh
    /// environment copy; in FrozenHigh mode the subgoal choice stays random.
    bench::MetricsReport evaluate(int episodes, uint64_t seed,
                                  std::vector<EpisodeRecord>* records = nullptr);

    /// Everything needed to resume: networks, optimizers, counters, random
    /// streams and both replay buffers.
    io::Checkpoint make_checkpoint() const;
    void restore(const io::Checkpoint& cp);

private:
    enum class Phase { Pretrain, Subgoal, Joint };
    Phase phase() const;
    bool low_learns() const;
    bool high_learns() const;
    bool high_random() const;
    EpisodeStats run_one();
    void on_env_step();
    void run_updates();

    sim::SimConfig sim_cfg_;
    HierarchyConfig hier_cfg_;
    rewards::HighRewardWeights hw_;
    rewards::LowRewardWeights lw_;
    TrainParams params_;
    agents::ObsScaler scaler_;
    sim::Environment env_;
    std::optional<agents::DqnAgent> dqn_;  // absent in Flat mode
    agents::Td3Agent td3_;
    replay::ReplayBuffer<std::array<double, 2>> low_buffer_;
    replay::ReplayBuffer<int> high_buffer_;
    Rng env_rng_;
    Rng policy_rng_;
    Rng train_rng_;

    int episodes_done_ = 0;
    int64_t env_steps_ = 0;
    int64_t update_triggers_ = 0;

    // per-episode accumulators
    double sum_loss_q_ = 0.0, sum_loss_c1_ = 0.0, sum_loss_c2_ = 0.0, sum_loss_actor_ = 0.0;
    int64_t n_loss_q_ = 0, n_loss_c_ = 0, n_loss_actor_ = 0;

    friend class TrainLowPolicy;
};

/// CSV log writers: the per-episode training log has a fixed header and
/// reproducible bytes; wall-clock times go to a separate timings file so
/// identical seeds still produce identical logs.
extern const char* const kTrainLogHeader;    // episode,steps,outcome,...
extern const char* const kTimingsHeader;     // episode,wall_ms

std::vector<std::string> train_log_row(const EpisodeStats& s);

}  // namespace hrlnav::hier
