#include "hrlnav/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hrlnav/astar.hpp"
#include "hrlnav/config.hpp"
#include "hrlnav/csvio.hpp"
#include "hrlnav/errors.hpp"
#include "hrlnav/svgplot.hpp"

namespace hrlnav::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kOutputDirEnv = "NAVBENCH_OUTPUT_DIR";

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

/// Flag > environment variable > config/default. Only the output directory
/// honors the environment.
void apply_output_env(const CLI::Option* flag, std::string& output_dir) {
    if (flag && flag->count() > 0) return;
    if (const char* env = std::getenv(kOutputDirEnv)) {
        if (*env) output_dir = env;
    }
}

std::string sibling_config_path(const std::string& checkpoint_path) {
    return (fs::path(checkpoint_path).parent_path() / "config.json").string();
}

/// Find --config/-c on the raw command line before the real parse, so the
/// file's values become the defaults every other flag overrides.
std::string prescan_config(int argc, const char* const* argv) {
    for (int i = 0; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" || a == "-c") {
            if (i + 1 < argc) return argv[i + 1];
        } else if (a.rfind("--config=", 0) == 0) {
            return a.substr(9);
        }
    }
    return {};
}

/// Frozen policies reconstructed from a run directory: the checkpoint for
/// parameters, its config snapshot for architecture and lattice shape.
struct PolicyBundle {
    hier::TrainingMode mode = hier::TrainingMode::Flat;
    agents::ObsScaler scaler;
    hier::HierarchyConfig hierarchy;
    std::optional<agents::DqnAgent> dqn;
    std::optional<agents::Td3Agent> td3;
};

PolicyBundle load_bundle(const std::string& checkpoint_path, const std::string& config_path) {
    const io::Checkpoint cp = io::load_checkpoint(checkpoint_path);
    const std::string cfg = config_path.empty() ? sibling_config_path(checkpoint_path) : config_path;
    RunConfig rc;
    try {
        rc = load_run_config_file(cfg);
    } catch (const IoError&) {
        throw IoError("no config snapshot found for checkpoint '" + checkpoint_path +
                      "' (expected " + cfg + "; pass --config)");
    }

    PolicyBundle b;
    const int64_t mode = cp.integer("trainer.mode");
    if (mode < 0 || mode > static_cast<int64_t>(hier::TrainingMode::FrozenLow))
        throw IoError("checkpoint: invalid training mode tag");
    b.mode = static_cast<hier::TrainingMode>(mode);
    b.scaler.scale = cp.vector("trainer.obs_scale");
    b.hierarchy = rc.hierarchy;

    const int obs_dim = rc.sim.n_beams + 4;
    agents::Td3Config tc = rc.td3;
    tc.obs_dim = obs_dim;
    b.td3.emplace(tc, 0);
    b.td3->restore(cp, "td3");
    if (b.mode != hier::TrainingMode::Flat && b.mode != hier::TrainingMode::FrozenHigh) {
        agents::DqnConfig dc = rc.dqn;
        dc.obs_dim = obs_dim;
        dc.n_actions = rc.hierarchy.n_actions();
        if (dc.epsilon.decay_steps <= 0) dc.epsilon.decay_steps = 1;  // greedy eval; unused
        b.dqn.emplace(dc, 0);
        b.dqn->restore(cp, "dqn");
    }
    return b;
}

std::vector<sim::Environment> build_envs(const std::vector<std::string>& world_files,
                                         const sim::SimConfig& sc) {
    std::vector<sim::Environment> envs;
    envs.reserve(world_files.size());
    for (const auto& w : world_files) envs.emplace_back(sim::load_world_file(w), sc);
    return envs;
}

bench::MetricsReport evaluate_bundle(PolicyBundle& b, std::vector<sim::Environment>& envs,
                                     const bench::EvalOptions& opt,
                                     std::vector<hier::EpisodeRecord>* records) {
    hier::Td3LowPolicy low(*b.td3, /*explore=*/false, &b.scaler);
    if (b.mode == hier::TrainingMode::Flat) {
        return bench::evaluate_flat(envs, low, {}, opt, records);
    }
    if (b.mode == hier::TrainingMode::FrozenHigh) {
        hier::RandomHighPolicy high(b.hierarchy.n_actions());
        return bench::evaluate_hierarchy(envs, high, low, b.hierarchy, {}, {}, opt, records);
    }
    hier::DqnHighPolicy high(*b.dqn, /*greedy=*/true, &b.scaler);
    return bench::evaluate_hierarchy(envs, high, low, b.hierarchy, {}, {}, opt, records);
}

// ---------------------------------------------------------------- train --

int cmd_train(RunConfig rc) {
    rc.resolve();
    sim::World world = sim::load_world_file(rc.world);

    fs::create_directories(rc.output_dir);
    write_text_file((fs::path(rc.output_dir) / "config.json").string(), run_config_to_text(rc));

    hier::Trainer trainer(std::move(world), rc.sim, rc.hierarchy, rc.dqn, rc.td3, {}, {}, rc.train,
                          rc.seed);
    if (!rc.init_from.empty()) trainer.restore(io::load_checkpoint(rc.init_from));

    io::CsvWriter log((fs::path(rc.output_dir) / "train_log.csv").string(),
                      hier::kTrainLogHeader);
    io::CsvWriter timings((fs::path(rc.output_dir) / "timings.csv").string(),
                          hier::kTimingsHeader);

    trainer.run([&](const hier::EpisodeStats& st) {
        log.write_row(hier::train_log_row(st));
        timings.write_row({std::to_string(st.episode), io::csv_number(st.wall_ms)});
        const int done = st.episode + 1;
        if (rc.checkpoint_every > 0 && done % rc.checkpoint_every == 0 && done < rc.episodes) {
            const auto path =
                fs::path(rc.output_dir) / ("checkpoint_ep" + std::to_string(done) + ".ckpt");
            io::save_checkpoint(path.string(), trainer.make_checkpoint());
        }
    });

    io::save_checkpoint((fs::path(rc.output_dir) / "checkpoint.ckpt").string(),
                        trainer.make_checkpoint());
    std::cout << "trained " << trainer.episodes_done() << " episodes (" << trainer.env_steps()
              << " env steps, " << trainer.update_triggers() << " update triggers) -> "
              << rc.output_dir << "\n";
    return 0;
}

// ----------------------------------------------------------------- eval --

int cmd_eval(const std::string& checkpoint, const std::string& config_path,
             std::vector<std::string> worlds, int episodes, uint64_t seed,
             std::string output_dir) {
    PolicyBundle bundle = load_bundle(checkpoint, config_path);
    const std::string cfg =
        config_path.empty() ? sibling_config_path(checkpoint) : config_path;
    RunConfig rc = load_run_config_file(cfg);
    if (worlds.empty()) worlds.push_back(rc.world);
    if (episodes <= 0) episodes = rc.eval_episodes;
    if (output_dir.empty()) output_dir = fs::path(checkpoint).parent_path().string();
    if (output_dir.empty()) output_dir = ".";

    auto envs = build_envs(worlds, rc.sim);
    bench::EvalOptions opt;
    opt.episodes = episodes;
    opt.seed = seed;
    const bench::MetricsReport report = evaluate_bundle(bundle, envs, opt, nullptr);

    fs::create_directories(output_dir);
    write_text_file((fs::path(output_dir) / "metrics.csv").string(), bench::report_csv(report));
    std::cout << bench::report_summary(report, fs::path(checkpoint).filename().string());
    return 0;
}

// ----------------------------------------------------------------- plot --

struct LogSeries {
    std::string stem;
    std::vector<double> episodes;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> columns;
};

LogSeries read_log(const std::string& path) {
    const io::CsvTable table = io::read_csv(path);
    if (table.rows.empty()) throw IoError("log has no data rows: " + path);
    LogSeries ls;
    ls.stem = fs::path(path).stem().string();
    const auto ep = io::numeric_column(table, "episode");
    for (const char* col : {"ep_reward_low", "ep_reward_high", "loss_q", "loss_c1", "loss_c2",
                            "loss_actor"}) {
        const auto vals = io::numeric_column(table, col);
        std::vector<double> x, y;
        for (size_t i = 0; i < vals.size(); ++i) {
            if (vals[i] && ep[i]) {
                x.push_back(*ep[i]);
                y.push_back(*vals[i]);
            }
        }
        if (!y.empty()) ls.columns[col] = {std::move(x), std::move(y)};
    }
    return ls;
}

void add_series_with_ma(std::vector<io::Series>& out, const LogSeries& ls, const std::string& col,
                        const std::string& label, int window, size_t& color_idx) {
    auto it = ls.columns.find(col);
    if (it == ls.columns.end()) return;
    const std::string color = kPalette[color_idx % kPaletteSize];
    ++color_idx;
    io::Series raw;
    raw.name = label;
    raw.x = it->second.first;
    raw.y = it->second.second;
    raw.color = color;
    raw.stroke_width = 0.8;
    io::Series ma;
    ma.name = label + " (ma" + std::to_string(window) + ")";
    ma.x = it->second.first;
    ma.y = io::moving_average(it->second.second, window);
    ma.color = color;
    ma.stroke_width = 2.0;
    ma.dashed = true;
    out.push_back(std::move(raw));
    out.push_back(std::move(ma));
}

int cmd_plot(const std::vector<std::string>& logs, int window, std::string output_dir) {
    if (window < 1) throw ConfigError("plot: window must be >= 1");
    if (output_dir.empty()) output_dir = fs::path(logs.front()).parent_path().string();
    if (output_dir.empty()) output_dir = ".";

    std::vector<LogSeries> parsed;
    parsed.reserve(logs.size());
    for (const auto& path : logs) parsed.push_back(read_log(path));
    const bool multi = parsed.size() > 1;
    auto label_for = [&](const LogSeries& ls, const char* col) {
        return multi ? ls.stem + " " + col : std::string(col);
    };

    std::vector<io::Series> reward_series;
    size_t color_idx = 0;
    for (const auto& ls : parsed) {
        add_series_with_ma(reward_series, ls, "ep_reward_low", label_for(ls, "ep_reward_low"),
                           window, color_idx);
        add_series_with_ma(reward_series, ls, "ep_reward_high", label_for(ls, "ep_reward_high"),
                           window, color_idx);
    }
    if (reward_series.empty()) throw IoError("plot: no reward data in the given logs");
    io::PlotSpec reward_spec;
    reward_spec.title = "Episode reward";
    reward_spec.x_label = "episode";
    reward_spec.y_label = "reward";

    std::vector<io::Series> loss_series;
    color_idx = 0;
    for (const auto& ls : parsed) {
        for (const char* col : {"loss_q", "loss_c1", "loss_c2", "loss_actor"}) {
            add_series_with_ma(loss_series, ls, col, label_for(ls, col), window, color_idx);
        }
    }
    io::PlotSpec loss_spec;
    loss_spec.title = "Training loss";
    loss_spec.x_label = "episode";
    loss_spec.y_label = "loss";

    fs::create_directories(output_dir);
    const auto reward_path = fs::path(output_dir) / "reward_curve.svg";
    write_text_file(reward_path.string(), io::render_line_plot(reward_spec, reward_series));
    std::cout << "wrote " << reward_path.string() << "\n";
    if (!loss_series.empty()) {
        const auto loss_path = fs::path(output_dir) / "loss_curve.svg";
        write_text_file(loss_path.string(), io::render_line_plot(loss_spec, loss_series));
        std::cout << "wrote " << loss_path.string() << "\n";
    } else {
        std::cout << "no loss data; loss_curve.svg not written\n";
    }
    return 0;
}

// ---------------------------------------------------------------- bench --

struct BenchEntry {
    std::string name;
    std::function<bench::MetricsReport(std::vector<sim::Environment>&, const bench::EvalOptions&,
                                       std::vector<hier::EpisodeRecord>*)>
        run;
};

double traveled_length(const hier::EpisodeRecord& rec) {
    double len = 0.0;
    for (size_t i = 1; i < rec.trajectory.size(); ++i) {
        const auto& a = rec.trajectory[i - 1];
        const auto& b = rec.trajectory[i];
        len += std::hypot(b.x - a.x, b.y - a.y);
    }
    if (!rec.trajectory.empty()) {
        const auto& last = rec.trajectory.back();
        len += std::hypot(rec.goal.x - last.x, rec.goal.y - last.y);
    }
    return len;
}

std::string fixed3(const std::optional<double>& v) {
    if (!v) return "";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", *v);
    return buf;
}

int cmd_bench(const std::vector<std::string>& checkpoint_args, const std::string& config_path,
              std::vector<std::string> worlds, int episodes, uint64_t seed,
              std::string output_dir) {
    // NAME=PATH entries; a bare path takes its filename stem as the name.
    std::vector<std::pair<std::string, std::string>> named;
    for (const auto& arg : checkpoint_args) {
        const auto eq = arg.find('=');
        if (eq == std::string::npos) {
            named.emplace_back(fs::path(arg).stem().string(), arg);
        } else {
            named.emplace_back(arg.substr(0, eq), arg.substr(eq + 1));
        }
    }

    const std::string shared_cfg_path =
        config_path.empty() ? sibling_config_path(named.front().second) : config_path;
    RunConfig rc = load_run_config_file(shared_cfg_path);
    if (worlds.empty()) worlds.push_back(rc.world);
    if (episodes <= 0) episodes = rc.eval_episodes;
    if (output_dir.empty()) output_dir = fs::path(named.front().second).parent_path().string();
    if (output_dir.empty()) output_dir = ".";

    std::vector<std::pair<std::string, PolicyBundle>> bundles;
    for (const auto& [name, path] : named) {
        bundles.emplace_back(name, load_bundle(path, config_path));
    }

    std::vector<BenchEntry> entries;
    for (auto& [name, bundle] : bundles) {
        auto* b = &bundle;
        entries.push_back({name, [b](std::vector<sim::Environment>& envs,
                                     const bench::EvalOptions& opt,
                                     std::vector<hier::EpisodeRecord>* recs) {
                               return evaluate_bundle(*b, envs, opt, recs);
                           }});
    }
    const size_t n_beams = static_cast<size_t>(rc.sim.n_beams);
    entries.push_back({"steer_to_goal",
                       [n_beams](std::vector<sim::Environment>& envs,
                                 const bench::EvalOptions& opt,
                                 std::vector<hier::EpisodeRecord>* recs) {
                           bench::SteerToGoalPolicy p(n_beams);
                           return bench::evaluate_flat(envs, p, {}, opt, recs);
                       }});
    entries.push_back({"always_forward",
                       [](std::vector<sim::Environment>& envs, const bench::EvalOptions& opt,
                          std::vector<hier::EpisodeRecord>* recs) {
                           bench::AlwaysForwardPolicy p;
                           return bench::evaluate_flat(envs, p, {}, opt, recs);
                       }});
    entries.push_back({"random",
                       [](std::vector<sim::Environment>& envs, const bench::EvalOptions& opt,
                          std::vector<hier::EpisodeRecord>* recs) {
                           bench::RandomLowPolicy p;
                           return bench::evaluate_flat(envs, p, {}, opt, recs);
                       }});

    // One inflated occupancy grid per world for the planner reference.
    std::vector<bench::Grid> grids;
    std::vector<double> world_astar;  // fixed start->goal length, <0 if unreachable
    for (const auto& w : worlds) {
        const sim::World world = sim::load_world_file(w);
        grids.push_back(bench::rasterize_world(world, 0.1));
        const auto plan = bench::astar_on_grid(grids.back(), world.start_pose.position(),
                                               world.goal);
        world_astar.push_back(plan.reachable ? plan.length_m : -1.0);
    }

    bench::EvalOptions opt;
    opt.episodes = episodes;
    opt.seed = seed;
    opt.record_trajectories = true;

    struct Row {
        std::string name;
        bench::MetricsReport report;
        std::optional<double> astar_efficiency;
    };
    std::vector<Row> rows;
    for (auto& entry : entries) {
        auto envs = build_envs(worlds, rc.sim);
        std::vector<hier::EpisodeRecord> records;
        bench::MetricsReport report = entry.run(envs, opt, &records);

        double sum = 0.0;
        int n = 0;
        for (size_t i = 0; i < records.size(); ++i) {
            const auto& rec = records[i];
            if (rec.outcome != sim::Outcome::GoalReached) continue;
            const auto& grid = grids[i % grids.size()];
            const auto plan = bench::astar_on_grid(grid, rec.start, rec.goal);
            const double traveled = traveled_length(rec);
            if (!plan.reachable || !(traveled > 0.0)) continue;
            sum += plan.length_m / traveled;
            ++n;
        }
        Row row;
        row.name = entry.name;
        row.report = std::move(report);
        if (n > 0) row.astar_efficiency = sum / n;
        rows.push_back(std::move(row));
    }

    std::string csv =
        "config,episodes,success_rate,collision_rate,timeout_rate,mean_time_to_goal,"
        "mean_path_efficiency,mean_path_efficiency_astar,mean_smoothness\n";
    for (const auto& row : rows) {
        const auto& r = row.report;
        auto opt_num = [](const std::optional<double>& v) {
            return v ? io::csv_number(*v) : std::string();
        };
        csv += row.name + "," + std::to_string(r.episodes) + "," +
               io::csv_number(r.success_rate) + "," + io::csv_number(r.collision_rate) + "," +
               io::csv_number(r.timeout_rate) + "," + opt_num(r.mean_time_to_goal) + "," +
               opt_num(r.mean_path_efficiency) + "," + opt_num(row.astar_efficiency) + "," +
               opt_num(r.mean_smoothness) + "\n";
    }

    std::ostringstream table;
    table << "benchmark over " << worlds.size() << " world(s), " << episodes
          << " episodes each, seed " << seed << "\n";
    for (size_t i = 0; i < worlds.size(); ++i) {
        table << "  world " << worlds[i] << ": planner reference ";
        if (world_astar[i] >= 0.0) {
            table << fixed3(world_astar[i]) << " m\n";
        } else {
            table << "unreachable\n";
        }
    }
    char line[256];
    std::snprintf(line, sizeof(line), "%-20s %8s %8s %8s %8s %8s %8s %8s\n", "config", "succ",
                  "coll", "tout", "time_s", "eff", "eff_A*", "smooth");
    table << line;
    for (const auto& row : rows) {
        const auto& r = row.report;
        std::snprintf(line, sizeof(line), "%-20s %8.3f %8.3f %8.3f %8s %8s %8s %8s\n",
                      row.name.c_str(), r.success_rate, r.collision_rate, r.timeout_rate,
                      fixed3(r.mean_time_to_goal).c_str(), fixed3(r.mean_path_efficiency).c_str(),
                      fixed3(row.astar_efficiency).c_str(), fixed3(r.mean_smoothness).c_str());
        table << line;
    }

    fs::create_directories(output_dir);
    write_text_file((fs::path(output_dir) / "bench.csv").string(), csv);
    write_text_file((fs::path(output_dir) / "bench.txt").string(), table.str());
    std::cout << table.str();
    return 0;
}

// ---------------------------------------------------------- inspection --

int cmd_inspect(const std::string& path) {
    const io::Checkpoint cp = io::load_checkpoint(path);
    std::cout << path << " (format_version " << io::Checkpoint::kFormatVersion << ", "
              << cp.sections.size() << " sections)\n"
              << io::describe_checkpoint(cp);
    return 0;
}

// ------------------------------------------------------------- wiring --

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"2D navigation RL workbench: subgoal + motion policy training, evaluation, "
                 "benchmarking and plotting"};
    app.require_subcommand(1);
    int code = 0;

    // train ---------------------------------------------------------------
    RunConfig rc;
    const std::string config_file = prescan_config(argc, argv);
    auto* train = app.add_subcommand("train", "Train agents and write logs + checkpoints");
    if (!config_file.empty()) {
        // Pre-load so explicit flags override the file's values below. Only
        // meaningful for train; other commands read their own --config.
        try {
            rc = load_run_config_file(config_file);
        } catch (const ConfigError&) {
            if (argc > 1 && std::string(argv[1]) == "train") throw;
        } catch (const IoError&) {
            if (argc > 1 && std::string(argv[1]) == "train") throw;
        }
    }
    std::string dummy_config;
    train->add_option("--config,-c", dummy_config, "Config file (JSON); flags override it");
    train->add_option("--world", rc.world, "World file");
    train->add_option("--mode", rc.mode,
                      "Training mode: td3, joint, alternating, frozen_high, frozen_low");
    train->add_option("--seed", rc.seed, "Random seed");
    train->add_option("--episodes", rc.episodes, "Training episode budget");
    auto* train_out = train->add_option("--output,-o", rc.output_dir, "Output directory");
    train->add_option("--init-from", rc.init_from, "Checkpoint to resume from");
    train->add_option("--checkpoint-every", rc.checkpoint_every,
                      "Also checkpoint every N episodes (0 = final only)");
    train->add_option("--eval-episodes", rc.eval_episodes, "Default episode count for eval/bench");
    train->add_option("--dt", rc.sim.dt, "Simulation timestep (s)");
    train->add_option("--max-steps", rc.sim.max_steps, "Episode step cap");
    train->add_option("--n-beams", rc.sim.n_beams, "Range-scan beam count");
    train->add_option("--fov-deg", rc.fov_deg, "Scan field of view (degrees)");
    train->add_option("--max-range", rc.sim.max_range, "Scan range cap (m)");
    train->add_option("--start-jitter", rc.sim.start_jitter, "Uniform start-position jitter (m)");
    train->add_flag("--randomize-start,!--no-randomize-start", rc.sim.randomize_start,
                    "Resample the start pose each episode");
    train->add_flag("--randomize-goal,!--no-randomize-goal", rc.sim.randomize_goal,
                    "Resample the goal each episode");
    train->add_option("--min-goal-separation", rc.sim.min_goal_separation,
                      "Minimum start-goal distance when randomizing (m)");
    train->add_option("--n-bearings", rc.hierarchy.n_bearings, "Subgoal bearing count");
    train->add_option("--horizon", rc.hierarchy.horizon, "Low-level steps per subgoal");
    train->add_option("--subgoal-radius", rc.hierarchy.subgoal_radius,
                      "Subgoal reached within this distance (m)");
    train->add_option("--dqn-lr", rc.dqn.lr, "Subgoal learner Adam step size");
    train->add_option("--dqn-gamma", rc.dqn.gamma, "Subgoal learner discount");
    train->add_option("--target-sync", rc.dqn.target_sync,
                      "Hard target sync period (gradient steps)");
    train->add_option("--epsilon-start", rc.dqn.epsilon.start, "Initial exploration rate");
    train->add_option("--epsilon-end", rc.dqn.epsilon.end, "Final exploration rate");
    train->add_option("--epsilon-decay-steps", rc.dqn.epsilon.decay_steps,
                      "Decay length in subgoal decisions (0 = derive from budget)");
    train->add_option("--lr-actor", rc.td3.lr_actor, "Motion actor Adam step size");
    train->add_option("--lr-critic", rc.td3.lr_critic, "Motion critic Adam step size");
    train->add_option("--td3-gamma", rc.td3.gamma, "Motion learner discount");
    train->add_option("--tau", rc.td3.tau, "Soft target update rate");
    train->add_option("--policy-delay", rc.td3.policy_delay,
                      "Critic updates per actor update");
    train->add_option("--sigma-explore", rc.td3.sigma_explore, "Exploration noise stddev");
    train->add_option("--sigma-target", rc.td3.sigma_target, "Target smoothing noise stddev");
    train->add_option("--noise-clip", rc.td3.noise_clip, "Target smoothing noise clip");
    train->add_option("--update-period", rc.train.update_period,
                      "Environment steps between learner updates");
    train->add_option("--grad-steps", rc.train.grad_steps, "Gradient steps per update trigger");
    train->add_option("--warmup", rc.train.warmup_env_steps,
                      "Random-action environment steps before critic updates");
    train->add_option("--low-capacity", rc.train.low_capacity, "Motion replay capacity");
    train->add_option("--high-capacity", rc.train.high_capacity, "Subgoal replay capacity");
    train->add_option("--low-batch", rc.train.low_batch, "Motion minibatch size");
    train->add_option("--high-batch", rc.train.high_batch, "Subgoal minibatch size");
    train->add_option("--phase-pretrain-frac", rc.train.phase_pretrain_frac,
                      "Alternating: motion-pretrain share of the budget");
    train->add_option("--phase-subgoal-frac", rc.train.phase_subgoal_frac,
                      "Alternating: frozen-motion subgoal-learning share");
    train->callback([&] {
        apply_output_env(train_out, rc.output_dir);
        code = cmd_train(rc);
    });

    // eval ----------------------------------------------------------------
    std::string eval_checkpoint, eval_config, eval_output;
    std::vector<std::string> eval_worlds;
    int eval_episodes = 0;
    uint64_t eval_seed = 0;
    auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint and write a metrics report");
    eval->add_option("--checkpoint", eval_checkpoint, "Checkpoint file")->required();
    eval->add_option("--config,-c", eval_config,
                     "Config snapshot (default: config.json beside the checkpoint)");
    eval->add_option("--world", eval_worlds, "World file(s); default from the config");
    eval->add_option("--episodes", eval_episodes, "Evaluation episodes (default from config)");
    eval->add_option("--seed", eval_seed, "Evaluation seed");
    auto* eval_out = eval->add_option("--output,-o", eval_output,
                                      "Output directory (default: checkpoint's directory)");
    eval->callback([&] {
        apply_output_env(eval_out, eval_output);
        code = cmd_eval(eval_checkpoint, eval_config, eval_worlds, eval_episodes, eval_seed,
                        eval_output);
    });

    // plot ----------------------------------------------------------------
    std::vector<std::string> plot_logs;
    int plot_window = 100;
    std::string plot_output;
    auto* plot = app.add_subcommand("plot", "Render reward and loss curves from training logs");
    plot->add_option("logs", plot_logs, "Training log CSV file(s)")->required();
    plot->add_option("--window", plot_window, "Moving-average window (episodes)");
    auto* plot_out = plot->add_option("--output,-o", plot_output,
                                      "Output directory (default: first log's directory)");
    plot->callback([&] {
        apply_output_env(plot_out, plot_output);
        code = cmd_plot(plot_logs, plot_window, plot_output);
    });

    // bench ---------------------------------------------------------------
    std::vector<std::string> bench_checkpoints, bench_worlds;
    std::string bench_config, bench_output;
    int bench_episodes = 0;
    uint64_t bench_seed = 0;
    auto* bench_cmd = app.add_subcommand(
        "bench", "Compare checkpoints and scripted baselines on a shared world suite");
    bench_cmd->add_option("--checkpoint", bench_checkpoints, "NAME=PATH (or PATH) entries")
        ->required();
    bench_cmd->add_option("--config,-c", bench_config,
                          "Shared eval config (default: beside the first checkpoint)");
    bench_cmd->add_option("--world", bench_worlds, "World file(s)");
    bench_cmd->add_option("--episodes", bench_episodes, "Episodes per configuration");
    bench_cmd->add_option("--seed", bench_seed, "Shared evaluation seed");
    auto* bench_out = bench_cmd->add_option("--output,-o", bench_output, "Output directory");
    bench_cmd->callback([&] {
        apply_output_env(bench_out, bench_output);
        code = cmd_bench(bench_checkpoints, bench_config, bench_worlds, bench_episodes,
                         bench_seed, bench_output);
    });

    // inspect-checkpoint ----------------------------------------------------
    std::string inspect_path;
    auto* inspect = app.add_subcommand("inspect-checkpoint", "List a checkpoint's sections");
    inspect->add_option("checkpoint", inspect_path, "Checkpoint file")->required();
    inspect->callback([&] { code = cmd_inspect(inspect_path); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int cli_code = app.exit(e);
        return cli_code == 0 ? 0 : 2;
    }
    return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace hrlnav::cli
