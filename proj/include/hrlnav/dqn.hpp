#pragma once

#include <cstdint>
#include <vector>

#include "hrlnav/checkpoint.hpp"
#include "hrlnav/nn.hpp"
#include "hrlnav/replay.hpp"

namespace hrlnav::agents {

/// Linear decay from start to end over decay_steps exploration calls,
/// then held at end. Monotone non-increasing.
struct EpsilonSchedule {
    double start = 1.0;
    double end = 0.05;
    int64_t decay_steps = 1;

    double value(int64_t step) const {
        if (step >= decay_steps) return end;
        const double f = static_cast<double>(step) / static_cast<double>(decay_steps);
        return start + (end - start) * f;
    }
};

struct DqnConfig {
    int obs_dim = 0;
    int n_actions = 0;
    std::vector<int> hidden{128, 128};
    double lr = 1e-3;
    double gamma = 0.99;
    int target_sync = 1000;  // hard target copy every this many gradient steps
    EpsilonSchedule epsilon;
};

/// Q-learner over a discrete action set. Exploration state (the epsilon
/// step counter) advances only on non-greedy select calls.
class DqnAgent {
public:
    DqnAgent(DqnConfig cfg, uint64_t seed);

    /// Epsilon-greedy (or pure argmax when greedy). Ties break to the
    /// lowest action index.
    int select_action(const std::vector<double>& obs, Rng& rng, bool greedy);

    /// Bootstrap targets y = r + gamma^span * (1-done) * max_a' Q_target.
    std::vector<double> targets(const std::vector<replay::Transition<int>>& batch) const;

    /// One minibatch gradient step; hard-syncs the target network on
    /// schedule. Returns the batch MSE loss.
    double train_step(const std::vector<replay::Transition<int>>& batch);

    double epsilon() const { return cfg_.epsilon.value(explore_calls_); }
    int64_t explore_calls() const { return explore_calls_; }
    int64_t grad_steps() const { return grad_steps_; }

    const DqnConfig& config() const { return cfg_; }
    const nn::Network& q_net() const { return q_net_; }
    nn::Network& q_net() { return q_net_; }
    const nn::Network& q_target() const { return q_target_; }

    /// Checkpoint sections under the given prefix (networks, optimizer,
    /// counters). Restore requires a matching config.
    void save(io::Checkpoint& cp, const std::string& prefix) const;
    void restore(const io::Checkpoint& cp, const std::string& prefix);

private:
    int argmax_q(const std::vector<double>& obs) const;

    DqnConfig cfg_;
    nn::Network q_net_;
    nn::Network q_target_;
    nn::AdamState opt_;
    int64_t explore_calls_ = 0;
    int64_t grad_steps_ = 0;
};

}  // namespace hrlnav::agents
