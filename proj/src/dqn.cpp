#include "hrlnav/dqn.hpp"

#include <cmath>
#include <stdexcept>

#include "hrlnav/errors.hpp"

namespace hrlnav::agents {

namespace {

std::vector<int> q_net_sizes(const DqnConfig& cfg) {
    std::vector<int> sizes{cfg.obs_dim};
    sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
    sizes.push_back(cfg.n_actions);
    return sizes;
}

std::vector<nn::Activation> q_net_acts(const DqnConfig& cfg) {
    std::vector<nn::Activation> acts(cfg.hidden.size(), nn::Activation::Relu);
    acts.push_back(nn::Activation::Linear);
    return acts;
}

}  // namespace

DqnAgent::DqnAgent(DqnConfig cfg, uint64_t seed) : cfg_(std::move(cfg)) {
    if (cfg_.obs_dim < 1) throw ConfigError("dqn: obs_dim must be positive");
    if (cfg_.n_actions < 2) throw ConfigError("dqn: need at least two actions");
    if (!(cfg_.gamma > 0.0 && cfg_.gamma < 1.0)) throw ConfigError("dqn: gamma must be in (0,1)");
    if (cfg_.target_sync < 1) throw ConfigError("dqn: target_sync must be >= 1");
    if (cfg_.epsilon.decay_steps < 1) throw ConfigError("dqn: epsilon decay_steps must be >= 1");
    q_net_ = nn::init(q_net_sizes(cfg_), q_net_acts(cfg_), seed);
    q_target_ = q_net_;
    opt_ = nn::make_adam(q_net_, {cfg_.lr, 0.9, 0.999, 1e-8});
}

int DqnAgent::argmax_q(const std::vector<double>& obs) const {
    const std::vector<double> q = nn::forward(q_net_, obs);
    int best = 0;
    for (int a = 1; a < cfg_.n_actions; ++a) {
        if (q[static_cast<size_t>(a)] > q[static_cast<size_t>(best)]) best = a;
    }
    return best;
}

int DqnAgent::select_action(const std::vector<double>& obs, Rng& rng, bool greedy) {
    if (greedy) return argmax_q(obs);
    const double eps = cfg_.epsilon.value(explore_calls_);
    explore_calls_ += 1;
    if (rng.uniform() < eps) return static_cast<int>(rng.uniform_index(cfg_.n_actions));
    return argmax_q(obs);
}

std::vector<double> DqnAgent::targets(const std::vector<replay::Transition<int>>& batch) const {
    std::vector<double> y(batch.size());
    for (size_t i = 0; i < batch.size(); ++i) {
        const auto& t = batch[i];
        double boot = 0.0;
        if (!t.done) {
            const std::vector<double> qn = nn::forward(q_target_, t.next_obs);
            boot = qn[0];
            for (double q : qn) boot = std::max(boot, q);
        }
        y[i] = t.reward + std::pow(cfg_.gamma, t.span) * boot;
    }
    return y;
}

double DqnAgent::train_step(const std::vector<replay::Transition<int>>& batch) {
    if (batch.empty()) throw std::invalid_argument("dqn: empty batch");
    const std::vector<double> y = targets(batch);
    nn::Gradients grads = nn::zero_gradients(q_net_);
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    nn::ForwardCache cache;
    for (size_t i = 0; i < batch.size(); ++i) {
        const auto& t = batch[i];
        if (t.action < 0 || t.action >= cfg_.n_actions) {
            throw std::invalid_argument("dqn: action index out of range");
        }
        const std::vector<double> q = nn::forward(q_net_, t.obs, cache);
        const double err = q[static_cast<size_t>(t.action)] - y[i];
        loss += err * err * inv_n;
        std::vector<double> out_grad(static_cast<size_t>(cfg_.n_actions), 0.0);
        out_grad[static_cast<size_t>(t.action)] = 2.0 * err * inv_n;
        nn::backward(q_net_, cache, std::move(out_grad), grads);
    }
    if (!std::isfinite(loss)) throw NumericError("dqn: non-finite loss");
    nn::adam_step(q_net_, grads, opt_);
    grad_steps_ += 1;
    if (grad_steps_ % cfg_.target_sync == 0) nn::hard_update(q_target_, q_net_);
    return loss;
}

void DqnAgent::save(io::Checkpoint& cp, const std::string& prefix) const {
    cp.put_network(prefix + ".q_net", q_net_);
    cp.put_network(prefix + ".q_target", q_target_);
    cp.put_adam(prefix + ".opt", opt_);
    cp.put_int(prefix + ".explore_calls", explore_calls_);
    cp.put_int(prefix + ".grad_steps", grad_steps_);
}

void DqnAgent::restore(const io::Checkpoint& cp, const std::string& prefix) {
    nn::Network q = cp.network(prefix + ".q_net");
    if (!q.same_arch(q_net_)) {
        throw IoError("checkpoint: saved network does not match the configured architecture");
    }
    q_net_ = std::move(q);
    q_target_ = cp.network(prefix + ".q_target");
    opt_ = cp.adam(prefix + ".opt");
    explore_calls_ = cp.integer(prefix + ".explore_calls");
    grad_steps_ = cp.integer(prefix + ".grad_steps");
}

}  // namespace hrlnav::agents
