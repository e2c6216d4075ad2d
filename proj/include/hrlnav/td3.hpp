#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "hrlnav/checkpoint.hpp"
#include "hrlnav/nn.hpp"
#include "hrlnav/replay.hpp"
#include "hrlnav/sim.hpp"

namespace hrlnav::agents {

struct Td3Config {
    int obs_dim = 0;
    std::vector<int> hidden{128, 128};
    double lr_actor = 1e-3;
    double lr_critic = 1e-3;
    double gamma = 0.99;
    double tau = 0.005;
    int policy_delay = 2;
    double sigma_explore = 0.1;  // exploration noise, action units
    double sigma_target = 0.2;   // target policy smoothing noise
    double noise_clip = 0.5;     // smoothing noise clip c
};

using Td3Batch = std::vector<replay::Transition<std::array<double, 2>>>;

/// Affine map from a tanh pair in [-1,1]^2 onto the action bounds:
/// linear = (t0+1)/2, angular = t1.
sim::Action tanh_to_action(double t0, double t1);

/// Differentiable critic view used by the actor update: returns Q(obs, a)
/// and dQ/da. Injectable so the actor step can be tested against critics
/// with a known closed form.
using QAndGrad = std::function<std::pair<double, std::array<double, 2>>(
    const std::vector<double>&, const std::array<double, 2>&)>;

/// One gradient step maximizing mean q over the observation batch, through
/// the tanh head mapping. Returns the loss -mean(q).
double actor_gradient_step(nn::Network& actor, nn::AdamState& opt,
                           const std::vector<std::vector<double>>& obs_batch, const QAndGrad& q);

/// Twin-critic deterministic-policy learner with delayed actor updates and
/// target policy smoothing.
class Td3Agent {
public:
    Td3Agent(Td3Config cfg, uint64_t seed);

    /// actor(obs) mapped to bounds; Gaussian noise added and re-clipped
    /// when exploring.
    sim::Action select_action(const std::vector<double>& obs, Rng& rng, bool explore) const;

    /// Clipped double-Q targets y = r + gamma^span*(1-done)*min(Q1',Q2')
    /// at the smoothed target action. Consumes 2 normal draws per item.
    std::vector<double> targets(const Td3Batch& batch, Rng& rng) const;

    /// Regress both critics toward shared targets; returns (loss1, loss2).
    std::pair<double, double> critic_update(const Td3Batch& batch, Rng& rng);

    /// Deterministic policy-gradient step on -mean Q1(s, actor(s)), then
    /// soft-updates all three targets. Must be called exactly when
    /// critic_updates is the next multiple of policy_delay.
    double actor_update(const Td3Batch& batch);

    struct StepLosses {
        double critic1 = 0.0;
        double critic2 = 0.0;
        std::optional<double> actor;
    };

    /// critic_update plus an actor_update every policy_delay-th call.
    StepLosses train_step(const Td3Batch& batch, Rng& rng);

    int64_t critic_updates() const { return critic_updates_; }
    int64_t actor_updates() const { return actor_updates_; }

    const Td3Config& config() const { return cfg_; }
    const nn::Network& actor() const { return actor_; }
    const nn::Network& actor_target() const { return actor_target_; }
    const nn::Network& critic1() const { return critic1_; }
    const nn::Network& critic2() const { return critic2_; }
    const nn::Network& critic1_target() const { return critic1_target_; }
    const nn::Network& critic2_target() const { return critic2_target_; }
    nn::Network& actor() { return actor_; }
    nn::Network& critic1() { return critic1_; }
    nn::Network& critic2() { return critic2_; }
    nn::Network& critic1_target() { return critic1_target_; }
    nn::Network& critic2_target() { return critic2_target_; }

    void save(io::Checkpoint& cp, const std::string& prefix) const;
    void restore(const io::Checkpoint& cp, const std::string& prefix);

private:
    double critic_value(const nn::Network& critic, const std::vector<double>& obs,
                        const std::array<double, 2>& action) const;

    Td3Config cfg_;
    nn::Network actor_, actor_target_;
    nn::Network critic1_, critic2_, critic1_target_, critic2_target_;
    nn::AdamState opt_actor_, opt_c1_, opt_c2_;
    int64_t critic_updates_ = 0;
    int64_t actor_updates_ = 0;
};

}  // namespace hrlnav::agents
