#include "hrlnav/td3.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hrlnav/errors.hpp"

namespace hrlnav::agents {

sim::Action tanh_to_action(double t0, double t1) {
    return sim::Action{(t0 + 1.0) / 2.0, t1}.clamped();
}

namespace {

std::vector<int> mlp_sizes(int in, const std::vector<int>& hidden, int out) {
    std::vector<int> sizes{in};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(out);
    return sizes;
}

std::vector<nn::Activation> mlp_acts(size_t n_hidden, nn::Activation head) {
    std::vector<nn::Activation> acts(n_hidden, nn::Activation::Relu);
    acts.push_back(head);
    return acts;
}

std::vector<double> concat_obs_action(const std::vector<double>& obs,
                                      const std::array<double, 2>& a) {
    std::vector<double> x;
    x.reserve(obs.size() + 2);
    x.insert(x.end(), obs.begin(), obs.end());
    x.push_back(a[0]);
    x.push_back(a[1]);
    return x;
}

}  // namespace

double actor_gradient_step(nn::Network& actor, nn::AdamState& opt,
                           const std::vector<std::vector<double>>& obs_batch, const QAndGrad& q) {
    if (obs_batch.empty()) throw std::invalid_argument("actor_gradient_step: empty batch");
    nn::Gradients grads = nn::zero_gradients(actor);
    const double inv_n = 1.0 / static_cast<double>(obs_batch.size());
    double loss = 0.0;
    nn::ForwardCache cache;
    for (const auto& obs : obs_batch) {
        const std::vector<double> t = nn::forward(actor, obs, cache);
        const sim::Action a = tanh_to_action(t[0], t[1]);
        auto [qv, dq_da] = q(obs, {a.linear, a.angular});
        loss += -qv * inv_n;
        // d(-q)/dt through linear=(t0+1)/2, angular=t1.
        std::vector<double> out_grad{-dq_da[0] * 0.5 * inv_n, -dq_da[1] * inv_n};
        nn::backward(actor, cache, std::move(out_grad), grads);
    }
    if (!std::isfinite(loss)) throw NumericError("td3: non-finite actor loss");
    nn::adam_step(actor, grads, opt);
    return loss;
}

Td3Agent::Td3Agent(Td3Config cfg, uint64_t seed) : cfg_(std::move(cfg)) {
    if (cfg_.obs_dim < 1) throw ConfigError("td3: obs_dim must be positive");
    if (!(cfg_.gamma > 0.0 && cfg_.gamma < 1.0)) throw ConfigError("td3: gamma must be in (0,1)");
    if (cfg_.policy_delay < 1) throw ConfigError("td3: policy_delay must be >= 1");
    if (!(cfg_.tau >= 0.0 && cfg_.tau <= 1.0)) throw ConfigError("td3: tau must be in [0,1]");

    Rng seeder(seed);
    const auto actor_sizes = mlp_sizes(cfg_.obs_dim, cfg_.hidden, 2);
    const auto critic_sizes = mlp_sizes(cfg_.obs_dim + 2, cfg_.hidden, 1);
    actor_ = nn::init(actor_sizes, mlp_acts(cfg_.hidden.size(), nn::Activation::Tanh),
                      seeder.fork_seed());
    critic1_ = nn::init(critic_sizes, mlp_acts(cfg_.hidden.size(), nn::Activation::Linear),
                        seeder.fork_seed());
    critic2_ = nn::init(critic_sizes, mlp_acts(cfg_.hidden.size(), nn::Activation::Linear),
                        seeder.fork_seed());
    actor_target_ = actor_;
    critic1_target_ = critic1_;
    critic2_target_ = critic2_;
    opt_actor_ = nn::make_adam(actor_, {cfg_.lr_actor, 0.9, 0.999, 1e-8});
    opt_c1_ = nn::make_adam(critic1_, {cfg_.lr_critic, 0.9, 0.999, 1e-8});
    opt_c2_ = nn::make_adam(critic2_, {cfg_.lr_critic, 0.9, 0.999, 1e-8});
}

sim::Action Td3Agent::select_action(const std::vector<double>& obs, Rng& rng,
                                    bool explore) const {
    const std::vector<double> t = nn::forward(actor_, obs);
    sim::Action a = tanh_to_action(t[0], t[1]);
    if (explore) {
        a.linear += rng.normal(0.0, cfg_.sigma_explore);
        a.angular += rng.normal(0.0, cfg_.sigma_explore);
        a = a.clamped();
    }
    return a;
}

double Td3Agent::critic_value(const nn::Network& critic, const std::vector<double>& obs,
                              const std::array<double, 2>& action) const {
    return nn::forward(critic, concat_obs_action(obs, action))[0];
}

std::vector<double> Td3Agent::targets(const Td3Batch& batch, Rng& rng) const {
    std::vector<double> y(batch.size());
    for (size_t i = 0; i < batch.size(); ++i) {
        const auto& t = batch[i];
        double boot = 0.0;
        if (!t.done) {
            const std::vector<double> at = nn::forward(actor_target_, t.next_obs);
            sim::Action a = tanh_to_action(at[0], at[1]);
            const double n0 =
                std::clamp(rng.normal(0.0, cfg_.sigma_target), -cfg_.noise_clip, cfg_.noise_clip);
            const double n1 =
                std::clamp(rng.normal(0.0, cfg_.sigma_target), -cfg_.noise_clip, cfg_.noise_clip);
            a.linear += n0;
            a.angular += n1;
            a = a.clamped();
            const double q1 = critic_value(critic1_target_, t.next_obs, {a.linear, a.angular});
            const double q2 = critic_value(critic2_target_, t.next_obs, {a.linear, a.angular});
            boot = std::min(q1, q2);
        } else {
            // Keep the rng stream aligned regardless of done flags.
            rng.normal();
            rng.normal();
        }
        y[i] = t.reward + std::pow(cfg_.gamma, t.span) * boot;
    }
    return y;
}

std::pair<double, double> Td3Agent::critic_update(const Td3Batch& batch, Rng& rng) {
    if (batch.empty()) throw std::invalid_argument("td3: empty batch");
    const std::vector<double> y = targets(batch, rng);
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    double losses[2] = {0.0, 0.0};
    nn::Network* critics[2] = {&critic1_, &critic2_};
    nn::AdamState* opts[2] = {&opt_c1_, &opt_c2_};
    nn::ForwardCache cache;
    for (int c = 0; c < 2; ++c) {
        nn::Gradients grads = nn::zero_gradients(*critics[c]);
        for (size_t i = 0; i < batch.size(); ++i) {
            const std::vector<double> x = concat_obs_action(batch[i].obs, batch[i].action);
            const double q = nn::forward(*critics[c], x, cache)[0];
            const double err = q - y[i];
            losses[c] += err * err * inv_n;
            nn::backward(*critics[c], cache, {2.0 * err * inv_n}, grads);
        }
        if (!std::isfinite(losses[c])) throw NumericError("td3: non-finite critic loss");
        nn::adam_step(*critics[c], grads, *opts[c]);
    }
    critic_updates_ += 1;
    return {losses[0], losses[1]};
}

double Td3Agent::actor_update(const Td3Batch& batch) {
    if (critic_updates_ != (actor_updates_ + 1) * cfg_.policy_delay) {
        throw std::logic_error("td3: actor update called off its delayed schedule");
    }
    std::vector<std::vector<double>> obs_batch;
    obs_batch.reserve(batch.size());
    for (const auto& t : batch) obs_batch.push_back(t.obs);

    nn::ForwardCache cache;
    nn::Gradients critic_grads = nn::zero_gradients(critic1_);
    const QAndGrad q = [&](const std::vector<double>& obs,
                           const std::array<double, 2>& a) -> std::pair<double, std::array<double, 2>> {
        const std::vector<double> x = concat_obs_action(obs, a);
        const double qv = nn::forward(critic1_, x, cache)[0];
        // Input gradient's last two components are dQ/da; the critic's own
        // parameter gradients are discarded.
        for (auto& g : critic_grads.w) std::fill(g.begin(), g.end(), 0.0);
        for (auto& g : critic_grads.b) std::fill(g.begin(), g.end(), 0.0);
        const std::vector<double> dx = nn::backward(critic1_, cache, {1.0}, critic_grads);
        return {qv, {dx[dx.size() - 2], dx[dx.size() - 1]}};
    };
    const double loss = actor_gradient_step(actor_, opt_actor_, obs_batch, q);

    nn::soft_update(actor_target_, actor_, cfg_.tau);
    nn::soft_update(critic1_target_, critic1_, cfg_.tau);
    nn::soft_update(critic2_target_, critic2_, cfg_.tau);
    actor_updates_ += 1;
    return loss;
}

Td3Agent::StepLosses Td3Agent::train_step(const Td3Batch& batch, Rng& rng) {
    StepLosses out;
    std::tie(out.critic1, out.critic2) = critic_update(batch, rng);
    if (critic_updates_ % cfg_.policy_delay == 0) out.actor = actor_update(batch);
    return out;
}

void Td3Agent::save(io::Checkpoint& cp, const std::string& prefix) const {
    cp.put_network(prefix + ".actor", actor_);
    cp.put_network(prefix + ".actor_target", actor_target_);
    cp.put_network(prefix + ".critic1", critic1_);
    cp.put_network(prefix + ".critic2", critic2_);
    cp.put_network(prefix + ".critic1_target", critic1_target_);
    cp.put_network(prefix + ".critic2_target", critic2_target_);
    cp.put_adam(prefix + ".opt_actor", opt_actor_);
    cp.put_adam(prefix + ".opt_critic1", opt_c1_);
    cp.put_adam(prefix + ".opt_critic2", opt_c2_);
    cp.put_int(prefix + ".critic_updates", critic_updates_);
    cp.put_int(prefix + ".actor_updates", actor_updates_);
}

void Td3Agent::restore(const io::Checkpoint& cp, const std::string& prefix) {
    nn::Network a = cp.network(prefix + ".actor");
    if (!a.same_arch(actor_)) {
        throw IoError("checkpoint: saved actor does not match the configured architecture");
    }
    actor_ = std::move(a);
    actor_target_ = cp.network(prefix + ".actor_target");
    critic1_ = cp.network(prefix + ".critic1");
    critic2_ = cp.network(prefix + ".critic2");
    critic1_target_ = cp.network(prefix + ".critic1_target");
    critic2_target_ = cp.network(prefix + ".critic2_target");
    opt_actor_ = cp.adam(prefix + ".opt_actor");
    opt_c1_ = cp.adam(prefix + ".opt_critic1");
    opt_c2_ = cp.adam(prefix + ".opt_critic2");
    critic_updates_ = cp.integer(prefix + ".critic_updates");
    actor_updates_ = cp.integer(prefix + ".actor_updates");
}

}  // namespace hrlnav::agents
