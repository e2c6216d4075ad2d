#include "hrlnav/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

#include "hrlnav/csvio.hpp"
#include "hrlnav/errors.hpp"

namespace hrlnav::hier {

namespace {

/// n-th raw output of the stream seeded with `seed`; equivalent to forking
/// child seeds off one parent stream in a fixed order.
uint64_t nth_seed(uint64_t seed, int n) {
    Rng r(seed);
    for (int i = 0; i < n; ++i) r.next_u64();
    return r.next_u64();
}

TrainParams validated(TrainParams p) {
    p.validate();
    return p;
}

HierarchyConfig validated(HierarchyConfig c) {
    c.validate();
    return c;
}

agents::DqnConfig resolve_dqn(agents::DqnConfig c, const sim::SimConfig& s,
                              const HierarchyConfig& h, const TrainParams& p) {
    const int obs_dim = s.n_beams + 4;
    if (c.obs_dim == 0) c.obs_dim = obs_dim;
    if (c.obs_dim != obs_dim) throw ConfigError("subgoal learner obs_dim does not match the sensor");
    if (c.n_actions == 0) c.n_actions = h.n_actions();
    if (c.n_actions != h.n_actions())
        throw ConfigError("subgoal learner action count does not match the subgoal lattice");
    if (c.epsilon.decay_steps <= 0) {
        // Linear decay over roughly the first 30% of subgoal decisions,
        // estimated as episodes * max_steps / horizon.
        const double decisions = static_cast<double>(p.episodes) * s.max_steps / h.horizon;
        c.epsilon.decay_steps = std::max<int64_t>(1, std::llround(0.3 * decisions));
    }
    return c;
}

agents::Td3Config resolve_td3(agents::Td3Config c, const sim::SimConfig& s) {
    const int obs_dim = s.n_beams + 4;
    if (c.obs_dim == 0) c.obs_dim = obs_dim;
    if (c.obs_dim != obs_dim) throw ConfigError("motion learner obs_dim does not match the sensor");
    return c;
}

std::optional<agents::DqnAgent> maybe_dqn(const TrainParams& p, const sim::SimConfig& s,
                                          const HierarchyConfig& h, agents::DqnConfig c,
                                          uint64_t seed) {
    if (p.mode == TrainingMode::Flat) return std::nullopt;
    return agents::DqnAgent(resolve_dqn(std::move(c), s, h, p), seed);
}

template <typename A>
void append_action(std::vector<double>& out, const A& a) {
    if constexpr (std::is_same_v<A, int>) {
        out.push_back(static_cast<double>(a));
    } else {
        out.push_back(a[0]);
        out.push_back(a[1]);
    }
}

template <typename A>
void read_action(const std::vector<double>& in, size_t& pos, A& a) {
    if constexpr (std::is_same_v<A, int>) {
        a = static_cast<int>(in.at(pos++));
    } else {
        a[0] = in.at(pos);
        a[1] = in.at(pos + 1);
        pos += 2;
    }
}

template <typename A>
void save_buffer(io::Checkpoint& cp, const std::string& prefix,
                 const replay::ReplayBuffer<A>& buf) {
    const auto& slots = buf.slots();
    const size_t dim = buf.obs_dim();
    cp.put_int(prefix + ".count", static_cast<int64_t>(slots.size()));
    cp.put_int(prefix + ".cursor", static_cast<int64_t>(buf.cursor()));
    std::vector<double> obs, next_obs, data;
    obs.reserve(slots.size() * dim);
    next_obs.reserve(slots.size() * dim);
    for (const auto& t : slots) {
        obs.insert(obs.end(), t.obs.begin(), t.obs.end());
        next_obs.insert(next_obs.end(), t.next_obs.begin(), t.next_obs.end());
        append_action(data, t.action);
        data.push_back(t.reward);
        data.push_back(t.done ? 1.0 : 0.0);
        data.push_back(static_cast<double>(t.span));
    }
    cp.put_vector(prefix + ".obs", std::move(obs));
    cp.put_vector(prefix + ".next_obs", std::move(next_obs));
    cp.put_vector(prefix + ".data", std::move(data));
}

template <typename A>
void restore_buffer(const io::Checkpoint& cp, const std::string& prefix,
                    replay::ReplayBuffer<A>& buf) {
    const auto count = static_cast<size_t>(cp.integer(prefix + ".count"));
    const auto cursor = static_cast<size_t>(cp.integer(prefix + ".cursor"));
    const auto& obs = cp.vector(prefix + ".obs");
    const auto& next_obs = cp.vector(prefix + ".next_obs");
    const auto& data = cp.vector(prefix + ".data");
    const size_t dim = buf.obs_dim();
    if (obs.size() != count * dim || next_obs.size() != count * dim)
        throw IoError("checkpoint: replay section '" + prefix + "' has inconsistent sizes");
    std::vector<replay::Transition<A>> slots(count);
    size_t pos = 0;
    try {
        for (size_t i = 0; i < count; ++i) {
            auto& t = slots[i];
            t.obs.assign(obs.begin() + i * dim, obs.begin() + (i + 1) * dim);
            t.next_obs.assign(next_obs.begin() + i * dim, next_obs.begin() + (i + 1) * dim);
            read_action(data, pos, t.action);
            t.reward = data.at(pos++);
            t.done = data.at(pos++) != 0.0;
            t.span = static_cast<int>(data.at(pos++));
        }
    } catch (const std::out_of_range&) {
        throw IoError("checkpoint: replay section '" + prefix + "' is truncated");
    }
    if (pos != data.size())
        throw IoError("checkpoint: replay section '" + prefix + "' has trailing values");
    try {
        buf.restore_slots(std::move(slots), cursor);
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("checkpoint: ") + e.what());
    }
}

}  // namespace

const char* training_mode_name(TrainingMode m) {
    switch (m) {
        case TrainingMode::Flat: return "td3";
        case TrainingMode::Joint: return "joint";
        case TrainingMode::Alternating: return "alternating";
        case TrainingMode::FrozenHigh: return "frozen_high";
        case TrainingMode::FrozenLow: return "frozen_low";
    }
    return "?";
}

TrainingMode training_mode_from_name(const std::string& name) {
    if (name == "td3" || name == "flat") return TrainingMode::Flat;
    if (name == "joint") return TrainingMode::Joint;
    if (name == "alternating") return TrainingMode::Alternating;
    if (name == "frozen_high") return TrainingMode::FrozenHigh;
    if (name == "frozen_low") return TrainingMode::FrozenLow;
    throw ConfigError("unknown training mode '" + name +
                      "' (expected td3, joint, alternating, frozen_high or frozen_low)");
}

void TrainParams::validate() const {
    if (episodes <= 0) throw ConfigError("training budget must be positive");
    if (update_period <= 0) throw ConfigError("update_period must be positive");
    if (grad_steps < 0) throw ConfigError("grad_steps must be non-negative");
    if (warmup_env_steps < 0) throw ConfigError("warmup_env_steps must be non-negative");
    if (low_batch <= 0 || high_batch <= 0) throw ConfigError("batch sizes must be positive");
    if (low_capacity < static_cast<size_t>(low_batch) ||
        high_capacity < static_cast<size_t>(high_batch))
        throw ConfigError("replay capacity below the batch size");
    if (phase_pretrain_frac < 0 || phase_subgoal_frac < 0 ||
        phase_pretrain_frac + phase_subgoal_frac > 1.0)
        throw ConfigError("phase fractions must be non-negative and sum to at most 1");
}

/// Behavior policy for the motion level during training: uniform random
/// actions until the warmup budget is spent (only while that level is
/// actually learning), then the current actor with or without noise.
class TrainLowPolicy : public LowPolicy {
public:
    TrainLowPolicy(Trainer& t, bool explore) : t_(t), explore_(explore) {}

    sim::Action select(const std::vector<double>& obs, Rng& rng) override {
        if (t_.low_learns() && t_.env_steps_ < t_.params_.warmup_env_steps) {
            const double lin = rng.uniform(sim::Action::kLinLo, sim::Action::kLinHi);
            const double ang = rng.uniform(sim::Action::kAngLo, sim::Action::kAngHi);
            return {lin, ang};
        }
        return t_.td3_.select_action(t_.scaler_.apply(obs), rng, explore_);
    }

private:
    Trainer& t_;
    bool explore_;
};

Trainer::Trainer(sim::World world, sim::SimConfig sim_cfg, HierarchyConfig hier_cfg,
                 agents::DqnConfig dqn_cfg, agents::Td3Config td3_cfg,
                 rewards::HighRewardWeights high_weights, rewards::LowRewardWeights low_weights,
                 TrainParams params, uint64_t seed)
    : sim_cfg_(sim_cfg),
      hier_cfg_(validated(std::move(hier_cfg))),
      hw_(high_weights),
      lw_(low_weights),
      params_(validated(params)),
      scaler_(agents::make_obs_scaler(
          sim_cfg.n_beams, sim_cfg.max_range,
          std::hypot(world.bounds.width(), world.bounds.height()))),
      env_(std::move(world), sim_cfg),
      dqn_(maybe_dqn(params_, sim_cfg, hier_cfg_, std::move(dqn_cfg), nth_seed(seed, 0))),
      td3_(resolve_td3(std::move(td3_cfg), sim_cfg), nth_seed(seed, 1)),
      low_buffer_(params_.low_capacity, static_cast<size_t>(sim_cfg.n_beams) + 4),
      high_buffer_(params_.high_capacity, static_cast<size_t>(sim_cfg.n_beams) + 4),
      env_rng_(nth_seed(seed, 2)),
      policy_rng_(nth_seed(seed, 3)),
      train_rng_(nth_seed(seed, 4)) {}

Trainer::Phase Trainer::phase() const {
    if (params_.mode != TrainingMode::Alternating) return Phase::Joint;
    const int a_end = static_cast<int>(std::llround(params_.episodes * params_.phase_pretrain_frac));
    const int b_end =
        a_end + static_cast<int>(std::llround(params_.episodes * params_.phase_subgoal_frac));
    if (episodes_done_ < a_end) return Phase::Pretrain;
    if (episodes_done_ < b_end) return Phase::Subgoal;
    return Phase::Joint;
}

bool Trainer::low_learns() const {
    switch (params_.mode) {
        case TrainingMode::Flat:
        case TrainingMode::Joint:
        case TrainingMode::FrozenHigh: return true;
        case TrainingMode::FrozenLow: return false;
        case TrainingMode::Alternating: return phase() != Phase::Subgoal;
    }
    return false;
}

bool Trainer::high_learns() const {
    switch (params_.mode) {
        case TrainingMode::Flat:
        case TrainingMode::FrozenHigh: return false;
        case TrainingMode::Joint:
        case TrainingMode::FrozenLow: return true;
        case TrainingMode::Alternating: return phase() != Phase::Pretrain;
    }
    return false;
}

bool Trainer::high_random() const {
    return params_.mode == TrainingMode::FrozenHigh ||
           (params_.mode == TrainingMode::Alternating && phase() == Phase::Pretrain);
}

void Trainer::on_env_step() {
    ++env_steps_;
    if (env_steps_ % params_.update_period == 0) {
        ++update_triggers_;
        run_updates();
    }
}

void Trainer::run_updates() {
    const bool low_ready = low_learns() && env_steps_ >= params_.warmup_env_steps &&
                           low_buffer_.size() >= static_cast<size_t>(params_.low_batch);
    const bool high_ready =
        high_learns() && dqn_ && high_buffer_.size() >= static_cast<size_t>(params_.high_batch);
    for (int g = 0; g < params_.grad_steps; ++g) {
        if (low_ready) {
            const auto batch = low_buffer_.sample(params_.low_batch, train_rng_);
            const auto losses = td3_.train_step(batch, train_rng_);
            sum_loss_c1_ += losses.critic1;
            sum_loss_c2_ += losses.critic2;
            ++n_loss_c_;
            if (losses.actor) {
                sum_loss_actor_ += *losses.actor;
                ++n_loss_actor_;
            }
        }
        if (high_ready) {
            const auto batch = high_buffer_.sample(params_.high_batch, train_rng_);
            sum_loss_q_ += dqn_->train_step(batch);
            ++n_loss_q_;
        }
    }
}

EpisodeStats Trainer::run_one() {
    sum_loss_q_ = sum_loss_c1_ = sum_loss_c2_ = sum_loss_actor_ = 0.0;
    n_loss_q_ = n_loss_c_ = n_loss_actor_ = 0;

    EpisodeSinks sinks;
    sinks.low = [this](const replay::Transition<std::array<double, 2>>& t) {
        replay::Transition<std::array<double, 2>> s;
        s.obs = scaler_.apply(t.obs);
        s.action = t.action;
        s.reward = t.reward;
        s.next_obs = scaler_.apply(t.next_obs);
        s.done = t.done;
        s.span = t.span;
        low_buffer_.push(std::move(s));
    };
    if (params_.mode != TrainingMode::Flat) {
        sinks.high = [this](const replay::Transition<int>& t) {
            replay::Transition<int> s;
            s.obs = scaler_.apply(t.obs);
            s.action = t.action;
            s.reward = t.reward;
            s.next_obs = scaler_.apply(t.next_obs);
            s.done = t.done;
            s.span = t.span;
            high_buffer_.push(std::move(s));
        };
    }
    sinks.on_env_step = [this] { on_env_step(); };

    TrainLowPolicy low(*this, /*explore=*/low_learns());
    std::unique_ptr<HighPolicy> high;
    if (params_.mode != TrainingMode::Flat) {
        if (high_random()) {
            high = std::make_unique<RandomHighPolicy>(hier_cfg_.n_actions());
        } else {
            high = std::make_unique<DqnHighPolicy>(*dqn_, /*greedy=*/false, &scaler_);
        }
    }

    const uint64_t episode_seed = env_rng_.next_u64();
    const auto t0 = std::chrono::steady_clock::now();
    EpisodeRecord rec;
    if (params_.mode == TrainingMode::Flat) {
        rec = run_flat_episode(env_, low, lw_, episode_seed, policy_rng_, &sinks, false);
    } else {
        rec = run_episode(env_, *high, low, hier_cfg_, hw_, lw_, episode_seed, policy_rng_, &sinks,
                          false);
    }
    const auto t1 = std::chrono::steady_clock::now();

    EpisodeStats st;
    st.episode = episodes_done_;
    st.steps = rec.steps;
    st.outcome = rec.outcome;
    st.reward_low = rec.reward_low;
    if (params_.mode != TrainingMode::Flat) st.reward_high = rec.reward_high;
    if (n_loss_q_ > 0) st.loss_q = sum_loss_q_ / static_cast<double>(n_loss_q_);
    if (n_loss_c_ > 0) {
        st.loss_c1 = sum_loss_c1_ / static_cast<double>(n_loss_c_);
        st.loss_c2 = sum_loss_c2_ / static_cast<double>(n_loss_c_);
    }
    if (n_loss_actor_ > 0) st.loss_actor = sum_loss_actor_ / static_cast<double>(n_loss_actor_);
    if (dqn_) st.epsilon = dqn_->epsilon();
    st.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    ++episodes_done_;
    return st;
}

void Trainer::run(const EpisodeCallback& cb) {
    run_episodes(params_.episodes - episodes_done_, cb);
}

void Trainer::run_episodes(int n, const EpisodeCallback& cb) {
    n = std::min(n, params_.episodes - episodes_done_);
    for (int i = 0; i < n; ++i) {
        const EpisodeStats st = run_one();
        if (cb) cb(st);
    }
}

bench::MetricsReport Trainer::evaluate(int episodes, uint64_t seed,
                                       std::vector<EpisodeRecord>* records) {
    std::vector<sim::Environment> envs{env_};
    bench::EvalOptions opt;
    opt.episodes = episodes;
    opt.seed = seed;
    opt.record_trajectories = records != nullptr;
    hier::Td3LowPolicy low(td3_, /*explore=*/false, &scaler_);
    if (params_.mode == TrainingMode::Flat) {
        return bench::evaluate_flat(envs, low, lw_, opt, records);
    }
    if (params_.mode == TrainingMode::FrozenHigh) {
        RandomHighPolicy high(hier_cfg_.n_actions());
        return bench::evaluate_hierarchy(envs, high, low, hier_cfg_, hw_, lw_, opt, records);
    }
    DqnHighPolicy high(*dqn_, /*greedy=*/true, &scaler_);
    return bench::evaluate_hierarchy(envs, high, low, hier_cfg_, hw_, lw_, opt, records);
}

io::Checkpoint Trainer::make_checkpoint() const {
    io::Checkpoint cp;
    cp.put_int("trainer.mode", static_cast<int64_t>(params_.mode));
    cp.put_int("trainer.episodes_done", episodes_done_);
    cp.put_int("trainer.env_steps", env_steps_);
    cp.put_int("trainer.update_triggers", update_triggers_);
    cp.put_text("trainer.rng_env", env_rng_.state());
    cp.put_text("trainer.rng_policy", policy_rng_.state());
    cp.put_text("trainer.rng_train", train_rng_.state());
    cp.put_vector("trainer.obs_scale", scaler_.scale);
    td3_.save(cp, "td3");
    if (dqn_) dqn_->save(cp, "dqn");
    save_buffer(cp, "buffer_low", low_buffer_);
    save_buffer(cp, "buffer_high", high_buffer_);
    return cp;
}

void Trainer::restore(const io::Checkpoint& cp) {
    if (cp.integer("trainer.mode") != static_cast<int64_t>(params_.mode))
        throw IoError("checkpoint: training mode does not match this run's configuration");
    episodes_done_ = static_cast<int>(cp.integer("trainer.episodes_done"));
    env_steps_ = cp.integer("trainer.env_steps");
    update_triggers_ = cp.integer("trainer.update_triggers");
    try {
        env_rng_.set_state(cp.text("trainer.rng_env"));
        policy_rng_.set_state(cp.text("trainer.rng_policy"));
        train_rng_.set_state(cp.text("trainer.rng_train"));
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("checkpoint: ") + e.what());
    }
    if (cp.vector("trainer.obs_scale") != scaler_.scale)
        throw IoError("checkpoint: observation scaling differs from this run's world/sensor");
    td3_.restore(cp, "td3");
    if (dqn_) dqn_->restore(cp, "dqn");
    restore_buffer(cp, "buffer_low", low_buffer_);
    restore_buffer(cp, "buffer_high", high_buffer_);
}

const char* const kTrainLogHeader =
    "episode,steps,outcome,ep_reward_low,ep_reward_high,loss_q,loss_c1,loss_c2,loss_actor,"
    "epsilon";
const char* const kTimingsHeader = "episode,wall_ms";

std::vector<std::string> train_log_row(const EpisodeStats& s) {
    auto opt = [](const std::optional<double>& v) { return v ? io::csv_number(*v) : std::string(); };
    return {std::to_string(s.episode),
            std::to_string(s.steps),
            sim::outcome_name(s.outcome),
            io::csv_number(s.reward_low),
            opt(s.reward_high),
            opt(s.loss_q),
            opt(s.loss_c1),
            opt(s.loss_c2),
            opt(s.loss_actor),
            opt(s.epsilon)};
}

}  // namespace hrlnav::hier
