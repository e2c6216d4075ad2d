#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "hrlnav/checkpoint.hpp"
#include "hrlnav/csvio.hpp"
#include "hrlnav/errors.hpp"
#include "hrlnav/metrics.hpp"
#include "hrlnav/train.hpp"
#include "hrlnav/world.hpp"
#include "support/oracles.hpp"

using namespace hrlnav;

namespace {

const char* kEmptyArena = R"({
  "format_version": 1,
  "bounds": [0, 0, 10, 10],
  "robot_radius": 0.2,
  "goal_radius": 0.3,
  "start": [1, 1, 0],
  "goal": [9, 9],
  "obstacles": []
})";

struct Setup {
    sim::SimConfig sim;
    hier::HierarchyConfig hier;
    agents::DqnConfig dqn;
    agents::Td3Config td3;
    hier::TrainParams params;
};

// Tiny networks and short episodes so a whole run takes well under a second.
Setup small_setup(hier::TrainingMode mode, int episodes) {
    Setup s;
    s.sim.n_beams = 12;
    s.sim.max_steps = 60;
    s.sim.randomize_goal = true;
    s.hier.horizon = 10;
    s.dqn.hidden = {8};
    s.td3.hidden = {8};
    s.params.mode = mode;
    s.params.episodes = episodes;
    s.params.update_period = 25;
    s.params.grad_steps = 2;
    s.params.warmup_env_steps = 50;
    s.params.low_capacity = 2000;
    s.params.high_capacity = 500;
    s.params.low_batch = 8;
    s.params.high_batch = 4;
    return s;
}

hier::Trainer make_trainer(const Setup& s, uint64_t seed) {
    return hier::Trainer(sim::load_world(kEmptyArena), s.sim, s.hier, s.dqn, s.td3, {}, {},
                         s.params, seed);
}

bool nets_equal(const nn::Network& a, const nn::Network& b) {
    if (a.layers.size() != b.layers.size()) return false;
    for (size_t i = 0; i < a.layers.size(); ++i) {
        if (a.layers[i].w != b.layers[i].w) return false;
        if (a.layers[i].b != b.layers[i].b) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("the callback fires once per episode in order") {
    const Setup s = small_setup(hier::TrainingMode::Flat, 5);
    hier::Trainer trainer = make_trainer(s, 3);

    std::vector<hier::EpisodeStats> rows;
    trainer.run([&](const hier::EpisodeStats& st) { rows.push_back(st); });

    CHECK(trainer.episodes_done() == 5);
    REQUIRE(rows.size() == 5);
    int64_t step_sum = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].episode == static_cast<int>(i));
        CHECK(rows[i].steps > 0);
        CHECK(rows[i].outcome != sim::Outcome::Running);
        // Flat mode has no subgoal learner.
        CHECK_FALSE(rows[i].reward_high.has_value());
        CHECK_FALSE(rows[i].epsilon.has_value());
        CHECK_FALSE(rows[i].loss_q.has_value());
        step_sum += rows[i].steps;
    }
    CHECK(trainer.env_steps() == step_sum);

    // Running past the budget is a no-op.
    trainer.run([&](const hier::EpisodeStats&) { rows.emplace_back(); });
    CHECK(rows.size() == 5);

    // Every row renders to the fixed log width.
    const size_t width = io::split_csv_line(hier::kTrainLogHeader).size();
    for (const auto& st : rows) CHECK(hier::train_log_row(st).size() == width);
}

TEST_CASE("update triggers fire exactly every update_period env steps") {
    const Setup s = small_setup(hier::TrainingMode::Flat, 4);
    hier::Trainer trainer = make_trainer(s, 11);
    trainer.run([](const hier::EpisodeStats&) {});
    CHECK(trainer.update_triggers() == trainer.env_steps() / s.params.update_period);
    CHECK(trainer.update_triggers() > 0);
}

TEST_CASE("a frozen motion level never changes parameters") {
    const Setup s = small_setup(hier::TrainingMode::FrozenLow, 3);
    hier::Trainer trainer = make_trainer(s, 7);

    const nn::Network actor0 = trainer.td3().actor();
    const nn::Network critic0 = trainer.td3().critic1();

    std::vector<hier::EpisodeStats> rows;
    trainer.run([&](const hier::EpisodeStats& st) { rows.push_back(st); });

    CHECK(nets_equal(trainer.td3().actor(), actor0));
    CHECK(nets_equal(trainer.td3().critic1(), critic0));
    CHECK(trainer.td3().critic_updates() == 0);

    // The subgoal learner does train on top of the frozen motion policy.
    REQUIRE(trainer.dqn() != nullptr);
    CHECK(trainer.dqn()->grad_steps() > 0);
    CHECK(rows.back().loss_q.has_value());
    CHECK(rows.back().reward_high.has_value());
    CHECK(rows.back().epsilon.has_value());
    CHECK_FALSE(rows.back().loss_c1.has_value());
}

TEST_CASE("the random-subgoal ablation never instantiates subgoal learning") {
    const Setup s = small_setup(hier::TrainingMode::FrozenHigh, 2);
    hier::Trainer trainer = make_trainer(s, 7);
    REQUIRE(trainer.dqn() != nullptr);
    trainer.run([](const hier::EpisodeStats&) {});
    CHECK(trainer.dqn()->grad_steps() == 0);     // subgoals stay random
    CHECK(trainer.dqn()->explore_calls() == 0);  // the policy is never consulted
    CHECK(trainer.td3().critic_updates() > 0);   // the motion level does learn
}

TEST_CASE("alternating phases hand control between the levels") {
    Setup s = small_setup(hier::TrainingMode::Alternating, 20);
    s.params.warmup_env_steps = 30;
    hier::Trainer trainer = make_trainer(s, 19);
    REQUIRE(trainer.dqn() != nullptr);

    // Phase edges as the trainer rounds them: 20 episodes -> pretrain
    // episodes 0-8, subgoal 9-15, joint 16-19.
    const int a_end = static_cast<int>(std::llround(20 * s.params.phase_pretrain_frac));
    const int b_end = a_end + static_cast<int>(std::llround(20 * s.params.phase_subgoal_frac));

    int64_t explore_after_pretrain = -1;
    int64_t critic_after_pretrain = -1;
    int64_t critic_after_subgoal = -1;
    trainer.run([&](const hier::EpisodeStats& st) {
        if (st.episode == a_end - 1) {
            explore_after_pretrain = trainer.dqn()->explore_calls();
            critic_after_pretrain = trainer.td3().critic_updates();
        }
        if (st.episode == b_end - 1) critic_after_subgoal = trainer.td3().critic_updates();
    });

    // Pretrain: random subgoals, so the subgoal policy was never consulted.
    CHECK(explore_after_pretrain == 0);
    CHECK(critic_after_pretrain > 0);
    // Subgoal phase: the motion level is frozen; its counters stand still.
    CHECK(critic_after_subgoal == critic_after_pretrain);
    // Joint phase: both move again.
    CHECK(trainer.td3().critic_updates() > critic_after_subgoal);
    CHECK(trainer.dqn()->explore_calls() > 0);
    CHECK(trainer.dqn()->grad_steps() > 0);
}

TEST_CASE("same seed, same run; different seed, different run") {
    const Setup s = small_setup(hier::TrainingMode::Joint, 4);

    auto collect = [&](uint64_t seed) {
        hier::Trainer trainer = make_trainer(s, seed);
        std::vector<std::vector<std::string>> rows;
        trainer.run([&](const hier::EpisodeStats& st) { rows.push_back(hier::train_log_row(st)); });
        return rows;
    };
    const auto a = collect(123);
    const auto b = collect(123);
    CHECK(a == b);
    const auto c = collect(124);
    CHECK(a != c);
}

TEST_CASE("a mid-run checkpoint resumes the exact trajectory") {
    const Setup s = small_setup(hier::TrainingMode::Joint, 6);
    testsupport::TempDir tmp;

    // Uninterrupted reference run.
    std::vector<std::vector<std::string>> ref_rows;
    hier::Trainer full = make_trainer(s, 42);
    full.run([&](const hier::EpisodeStats& st) { ref_rows.push_back(hier::train_log_row(st)); });
    io::save_checkpoint(tmp.file("full.ckpt"), full.make_checkpoint());

    // Interrupted run: stop after 3 episodes, serialize, restore, finish.
    hier::Trainer first = make_trainer(s, 42);
    std::vector<std::vector<std::string>> rows;
    first.run_episodes(3, [&](const hier::EpisodeStats& st) {
        rows.push_back(hier::train_log_row(st));
    });
    CHECK(first.episodes_done() == 3);
    io::save_checkpoint(tmp.file("mid.ckpt"), first.make_checkpoint());

    hier::Trainer second = make_trainer(s, 999);  // seed is overwritten by restore
    second.restore(io::load_checkpoint(tmp.file("mid.ckpt")));
    CHECK(second.episodes_done() == 3);
    CHECK(second.env_steps() == first.env_steps());
    second.run([&](const hier::EpisodeStats& st) { rows.push_back(hier::train_log_row(st)); });
    io::save_checkpoint(tmp.file("resumed.ckpt"), second.make_checkpoint());

    CHECK(rows == ref_rows);
    CHECK(testsupport::read_file(tmp.file("resumed.ckpt")) ==
          testsupport::read_file(tmp.file("full.ckpt")));
}

TEST_CASE("restore rejects checkpoints from a different configuration") {
    const Setup s = small_setup(hier::TrainingMode::Joint, 4);
    hier::Trainer donor = make_trainer(s, 1);
    donor.run_episodes(1, [](const hier::EpisodeStats&) {});
    const io::Checkpoint cp = donor.make_checkpoint();

    Setup other = s;
    other.params.mode = hier::TrainingMode::FrozenHigh;
    hier::Trainer wrong_mode = make_trainer(other, 1);
    auto restore_mode = [&]() { wrong_mode.restore(cp); };
    CHECK_THROWS_AS(restore_mode(), IoError);

    Setup wider = s;
    wider.td3.hidden = {16};
    hier::Trainer wrong_arch = make_trainer(wider, 1);
    auto restore_arch = [&]() { wrong_arch.restore(cp); };
    CHECK_THROWS_AS(restore_arch(), IoError);
}

TEST_CASE("evaluation is reproducible and leaves training untouched") {
    // Flat mode: the actor is a continuous function of goal-relative inputs,
    // so randomized goals are guaranteed to show up in the episode rows. (A
    // barely-trained discrete high policy can map every goal to the same
    // subgoal sequence, which would legitimately hide the seed.)
    const Setup s = small_setup(hier::TrainingMode::Flat, 3);
    hier::Trainer trainer = make_trainer(s, 5);
    trainer.run_episodes(2, [](const hier::EpisodeStats&) {});

    const int64_t steps_before = trainer.env_steps();
    std::vector<hier::EpisodeRecord> rec_a;
    const auto a = bench::report_csv(trainer.evaluate(4, 77, &rec_a));
    const auto b = bench::report_csv(trainer.evaluate(4, 77));
    CHECK(a == b);
    CHECK(trainer.env_steps() == steps_before);
    CHECK(trainer.episodes_done() == 2);

    // Each evaluation episode resets from its own seed, so the randomized
    // goals must not all coincide.
    REQUIRE(rec_a.size() == 4);
    bool goals_vary = false;
    for (size_t i = 1; i < rec_a.size(); ++i) {
        if (geom::distance(rec_a[i].goal, rec_a[0].goal) > 1e-9) goals_vary = true;
    }
    CHECK(goals_vary);

    const auto c = bench::report_csv(trainer.evaluate(4, 78));
    CHECK(a != c);
}

TEST_CASE("construction validates configuration consistency") {
    SUBCASE("mismatched learner widths") {
        Setup s = small_setup(hier::TrainingMode::Joint, 2);
        s.dqn.obs_dim = 7;  // sensor gives 12 beams + 4
        auto build = [&]() { make_trainer(s, 1); };
        CHECK_THROWS_AS(build(), ConfigError);

        Setup t = small_setup(hier::TrainingMode::Flat, 2);
        t.td3.obs_dim = 9;
        auto build_t = [&]() { make_trainer(t, 1); };
        CHECK_THROWS_AS(build_t(), ConfigError);
    }
    SUBCASE("mismatched action lattice") {
        Setup s = small_setup(hier::TrainingMode::Joint, 2);
        s.dqn.n_actions = 5;
        auto build = [&]() { make_trainer(s, 1); };
        CHECK_THROWS_AS(build(), ConfigError);
    }
    SUBCASE("replay capacity below batch size") {
        Setup s = small_setup(hier::TrainingMode::Joint, 2);
        s.params.low_capacity = 4;  // < low_batch 8
        auto build = [&]() { make_trainer(s, 1); };
        CHECK_THROWS_AS(build(), ConfigError);
    }
    SUBCASE("phase fractions must leave room for the joint phase") {
        Setup s = small_setup(hier::TrainingMode::Alternating, 2);
        s.params.phase_pretrain_frac = 0.7;
        s.params.phase_subgoal_frac = 0.5;
        auto build = [&]() { make_trainer(s, 1); };
        CHECK_THROWS_AS(build(), ConfigError);
    }
}

TEST_CASE("epsilon decay derives from the episode budget when unset") {
    Setup s = small_setup(hier::TrainingMode::Joint, 10);
    s.dqn.epsilon.decay_steps = 0;
    hier::Trainer trainer = make_trainer(s, 2);
    REQUIRE(trainer.dqn() != nullptr);
    // 0.3 * episodes * max_steps / horizon = 0.3 * 10 * 60 / 10 = 18.
    CHECK(trainer.dqn()->config().epsilon.decay_steps == 18);

    Setup e = small_setup(hier::TrainingMode::Joint, 10);
    e.dqn.epsilon.decay_steps = 7;
    hier::Trainer explicit_decay = make_trainer(e, 2);
    CHECK(explicit_decay.dqn()->config().epsilon.decay_steps == 7);
}
