// End-to-end tests that drive the real executable (path baked in as
// NAVBENCH_BIN) through a shell, checking exit codes, the files each
// subcommand writes, and byte-level reproducibility across reruns.
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hrlnav/cli.hpp"
#include "hrlnav/csvio.hpp"
#include "support/oracles.hpp"

using namespace hrlnav;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string shell_quote(const std::string& s) { return "'" + s + "'"; }

/// Run the binary through /bin/sh, capturing exit code, stdout and stderr.
/// `env_prefix` is prepended verbatim (e.g. "VAR=value ").
CmdResult run_navbench(const std::string& args, const std::string& env_prefix = "") {
    static testsupport::TempDir capture_dir;
    static int counter = 0;
    const std::string out_path = capture_dir.file("out_" + std::to_string(counter));
    const std::string err_path = capture_dir.file("err_" + std::to_string(counter));
    ++counter;

    const std::string cmd = env_prefix + shell_quote(NAVBENCH_BIN) + " " + args + " > " +
                            shell_quote(out_path) + " 2> " + shell_quote(err_path);
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));

    CmdResult r;
    r.code = WEXITSTATUS(status);
    r.out = testsupport::read_file(out_path);
    r.err = testsupport::read_file(err_path);
    return r;
}

/// A configuration small enough that a full training run takes well under a
/// second: short episodes, tiny networks, early and frequent updates.
std::string small_config(const std::string& output_dir, const std::string& mode, int episodes,
                         int seed) {
    std::ostringstream s;
    s << "{\n"
      << "  \"world\": \"worlds/empty.world\",\n"
      << "  \"mode\": \"" << mode << "\",\n"
      << "  \"seed\": " << seed << ",\n"
      << "  \"episodes\": " << episodes << ",\n"
      << "  \"eval_episodes\": 4,\n"
      << "  \"output_dir\": \"" << output_dir << "\",\n"
      << "  \"sim\": {\"n_beams\": 10, \"max_steps\": 40, \"randomize_goal\": true},\n"
      << "  \"hierarchy\": {\"horizon\": 10},\n"
      << "  \"dqn\": {\"hidden\": [8], \"epsilon_decay_steps\": 100},\n"
      << "  \"td3\": {\"hidden\": [8]},\n"
      << "  \"train\": {\"update_period\": 20, \"grad_steps\": 2, \"warmup_env_steps\": 30,\n"
      << "             \"low_capacity\": 2000, \"high_capacity\": 400,\n"
      << "             \"low_batch\": 8, \"high_batch\": 4}\n"
      << "}\n";
    return s.str();
}

/// Write a config into `dir`, train into `dir`/run, and return the run dir.
std::string train_into(const testsupport::TempDir& tmp, const std::string& tag,
                       const std::string& mode, int episodes, int seed,
                       const std::string& extra_flags = "") {
    const std::string run_dir = tmp.file(tag);
    const std::string cfg_path = tmp.file(tag + "_config.json");
    testsupport::write_file(cfg_path, small_config(run_dir, mode, episodes, seed));
    const auto r = run_navbench("train -c " + shell_quote(cfg_path) + " " + extra_flags);
    INFO("stderr: " << r.err);
    REQUIRE(r.code == 0);
    return run_dir;
}

}  // namespace

TEST_CASE("cli: help, usage errors and exit codes") {
    CHECK(run_navbench("--help").code == 0);
    CHECK(run_navbench("train --help").code == 0);

    // A subcommand is mandatory, unknown ones and bad flag values are usage
    // errors, and missing required options are reported before any work.
    CHECK(run_navbench("").code == 2);
    CHECK(run_navbench("frobnicate").code == 2);
    CHECK(run_navbench("train --episodes notanumber").code == 2);
    CHECK(run_navbench("eval").code == 2);
    CHECK(run_navbench("inspect-checkpoint").code == 2);

    // The embedded entry point maps configuration errors to exit code 2.
    testsupport::TempDir tmp;
    const std::string bad = tmp.file("bad.json");
    testsupport::write_file(bad, "{\"grvty\": 1}");
    const char* argv[] = {"navbench", "train", "-c", bad.c_str()};
    CHECK(cli::run_cli(4, argv) == 2);
}

TEST_CASE("cli: train writes a complete run directory") {
    testsupport::TempDir tmp;
    const std::string run = train_into(tmp, "run", "td3", 6, 5);

    for (const char* name : {"config.json", "train_log.csv", "timings.csv", "checkpoint.ckpt"}) {
        INFO("expected file: " << name);
        CHECK(fs::exists(fs::path(run) / name));
    }

    const io::CsvTable log = io::read_csv((fs::path(run) / "train_log.csv").string());
    CHECK(log.header.size() == 10);
    CHECK(log.header.at(0) == "episode");
    CHECK(log.rows.size() == 6);

    // The config snapshot the run leaves behind must itself be loadable and
    // reproduce the requested run (eval and bench rely on this).
    const auto reparsed = run_navbench("train -c " +
                                       shell_quote((fs::path(run) / "config.json").string()) +
                                       " -o " + shell_quote(tmp.file("run_copy")));
    CHECK(reparsed.code == 0);

    const io::CsvTable timings = io::read_csv((fs::path(run) / "timings.csv").string());
    CHECK(timings.rows.size() == 6);
}

TEST_CASE("cli: train prints a one-line summary") {
    testsupport::TempDir tmp;
    const std::string run_dir = tmp.file("run");
    const std::string cfg = tmp.file("config.json");
    testsupport::write_file(cfg, small_config(run_dir, "td3", 3, 1));
    const auto r = run_navbench("train -c " + shell_quote(cfg));
    CHECK(r.code == 0);
    CHECK(r.out.find("trained 3 episodes") != std::string::npos);
}

TEST_CASE("cli: hierarchical training populates subgoal columns") {
    testsupport::TempDir tmp;
    const std::string run = train_into(tmp, "joint", "joint", 4, 11);
    const io::CsvTable log = io::read_csv((fs::path(run) / "train_log.csv").string());
    REQUIRE(log.rows.size() == 4);

    const auto eps = io::numeric_column(log, "epsilon");
    const auto r_high = io::numeric_column(log, "ep_reward_high");
    REQUIRE(eps.size() == 4);
    CHECK(eps.back().has_value());
    CHECK(r_high.back().has_value());
}

TEST_CASE("cli: same seed gives byte-identical logs and checkpoints") {
    testsupport::TempDir tmp;
    const std::string a = train_into(tmp, "a", "td3", 6, 5);
    const std::string b = train_into(tmp, "b", "td3", 6, 5);
    const std::string c = train_into(tmp, "c", "td3", 6, 6);

    auto bytes = [](const std::string& dir, const char* name) {
        return testsupport::read_file((fs::path(dir) / name).string());
    };
    CHECK(bytes(a, "train_log.csv") == bytes(b, "train_log.csv"));
    CHECK(bytes(a, "checkpoint.ckpt") == bytes(b, "checkpoint.ckpt"));
    CHECK(bytes(a, "train_log.csv") != bytes(c, "train_log.csv"));
}

TEST_CASE("cli: configuration failures are exit code 2, missing files 4") {
    testsupport::TempDir tmp;

    SUBCASE("unknown key is named in the error") {
        const std::string cfg = tmp.file("bad.json");
        testsupport::write_file(cfg, "{\"grvty\": 1}");
        const auto r = run_navbench("train -c " + shell_quote(cfg));
        CHECK(r.code == 2);
        CHECK(r.err.find("unknown key 'grvty'") != std::string::npos);
    }
    SUBCASE("invalid JSON") {
        const std::string cfg = tmp.file("bad.json");
        testsupport::write_file(cfg, "not json at all");
        const auto r = run_navbench("train -c " + shell_quote(cfg));
        CHECK(r.code == 2);
        CHECK(r.err.find("not valid JSON") != std::string::npos);
    }
    SUBCASE("unknown training mode") {
        const std::string cfg = tmp.file("bad.json");
        testsupport::write_file(cfg, small_config(tmp.file("out"), "sarsa", 2, 1));
        const auto r = run_navbench("train -c " + shell_quote(cfg));
        CHECK(r.code == 2);
        CHECK(r.err.find("sarsa") != std::string::npos);
    }
    SUBCASE("missing config file") {
        const auto r = run_navbench("train -c " + shell_quote(tmp.file("nope.json")));
        CHECK(r.code == 4);
    }
    SUBCASE("missing world file") {
        std::string cfg_text = small_config(tmp.file("out"), "td3", 2, 1);
        const auto pos = cfg_text.find("worlds/empty.world");
        REQUIRE(pos != std::string::npos);
        cfg_text.replace(pos, std::string("worlds/empty.world").size(), "worlds/nope.world");
        const std::string cfg = tmp.file("noworld.json");
        testsupport::write_file(cfg, cfg_text);
        const auto r = run_navbench("train -c " + shell_quote(cfg));
        CHECK(r.code == 4);
    }
}

TEST_CASE("cli: eval writes reproducible metrics next to the checkpoint") {
    testsupport::TempDir tmp;
    const std::string run = train_into(tmp, "run", "td3", 4, 5);
    const std::string ckpt = (fs::path(run) / "checkpoint.ckpt").string();

    // Default output directory is the checkpoint's own directory.
    const auto r0 = run_navbench("eval --checkpoint " + shell_quote(ckpt) +
                                 " --episodes 4 --seed 7");
    INFO("stderr: " << r0.err);
    CHECK(r0.code == 0);
    CHECK(fs::exists(fs::path(run) / "metrics.csv"));
    CHECK(r0.out.find("episodes") != std::string::npos);

    // Same seed into two fresh directories: byte-identical reports.
    const auto r1 = run_navbench("eval --checkpoint " + shell_quote(ckpt) +
                                 " --episodes 4 --seed 7 -o " + shell_quote(tmp.file("e1")));
    const auto r2 = run_navbench("eval --checkpoint " + shell_quote(ckpt) +
                                 " --episodes 4 --seed 7 -o " + shell_quote(tmp.file("e2")));
    CHECK(r1.code == 0);
    CHECK(r2.code == 0);
    const std::string m1 = testsupport::read_file(tmp.file("e1/metrics.csv"));
    const std::string m2 = testsupport::read_file(tmp.file("e2/metrics.csv"));
    CHECK(m1 == m2);

    const io::CsvTable metrics = io::read_csv(tmp.file("e1/metrics.csv"));
    CHECK(metrics.header.at(0) == "episode");
    CHECK(metrics.rows.size() == 4);

    // A different seed must actually change the rollout.
    const auto r3 = run_navbench("eval --checkpoint " + shell_quote(ckpt) +
                                 " --episodes 4 --seed 8 -o " + shell_quote(tmp.file("e3")));
    CHECK(r3.code == 0);
    CHECK(testsupport::read_file(tmp.file("e3/metrics.csv")) != m1);
}

TEST_CASE("cli: eval without a config snapshot explains what to pass") {
    testsupport::TempDir tmp;
    const std::string run = train_into(tmp, "run", "td3", 3, 5);

    const std::string bare = tmp.file("bare");
    fs::create_directories(bare);
    fs::copy_file(fs::path(run) / "checkpoint.ckpt", fs::path(bare) / "checkpoint.ckpt");

    const std::string orphan = (fs::path(bare) / "checkpoint.ckpt").string();
    const auto r = run_navbench("eval --checkpoint " + shell_quote(orphan) + " --episodes 2");
    CHECK(r.code == 4);
    CHECK(r.err.find("pass --config") != std::string::npos);

    // Pointing at the original snapshot recovers.
    const auto ok = run_navbench("eval --checkpoint " + shell_quote(orphan) + " --config " +
                                 shell_quote((fs::path(run) / "config.json").string()) +
                                 " --episodes 2 --seed 1 -o " + shell_quote(tmp.file("out")));
    INFO("stderr: " << ok.err);
    CHECK(ok.code == 0);
}

TEST_CASE("cli: corrupted checkpoints are refused with exit code 4") {
    testsupport::TempDir tmp;
    const std::string run = train_into(tmp, "run", "td3", 3, 5);
    const std::string ckpt = (fs::path(run) / "checkpoint.ckpt").string();

    SUBCASE("truncated file") {
        const std::string cut = tmp.file("cut.ckpt");
        fs::copy_file(ckpt, cut);
        fs::resize_file(cut, 16);
        CHECK(run_navbench("inspect-checkpoint " + shell_quote(cut)).code == 4);
        CHECK(run_navbench("eval --checkpoint " + shell_quote(cut)).code == 4);
    }
    SUBCASE("wrong magic") {
        std::string bytes = testsupport::read_file(ckpt);
        REQUIRE(bytes.size() > 8);
        for (int i = 0; i < 8; ++i) bytes[static_cast<size_t>(i)] = 'X';
        const std::string bad = tmp.file("bad.ckpt");
        testsupport::write_file(bad, bytes);
        CHECK(run_navbench("inspect-checkpoint " + shell_quote(bad)).code == 4);
    }
    SUBCASE("missing path") {
        CHECK(run_navbench("inspect-checkpoint " + shell_quote(tmp.file("nope.ckpt"))).code == 4);
    }
}

TEST_CASE("cli: inspect-checkpoint lists sections") {
    testsupport::TempDir tmp;
    const std::string run = train_into(tmp, "run", "td3", 3, 5);
    const auto r =
        run_navbench("inspect-checkpoint " + shell_quote((fs::path(run) / "checkpoint.ckpt").string()));
    CHECK(r.code == 0);
    CHECK(r.out.find("sections") != std::string::npos);
    CHECK(r.out.find("trainer.obs_scale") != std::string::npos);
    CHECK(r.out.find("td3.actor") != std::string::npos);
}

TEST_CASE("cli: plot renders reward and loss curves") {
    testsupport::TempDir tmp;
    const std::string run = train_into(tmp, "run", "td3", 6, 5);
    const std::string log = (fs::path(run) / "train_log.csv").string();

    const std::string plot_dir = tmp.file("plots");
    const auto r = run_navbench("plot " + shell_quote(log) + " --window 3 -o " +
                                shell_quote(plot_dir));
    INFO("stderr: " << r.err);
    CHECK(r.code == 0);

    const std::string svg = testsupport::read_file((fs::path(plot_dir) / "reward_curve.svg").string());
    CHECK(svg.find("<svg ") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);

    // Motion-learner losses are logged, so the loss curve is written too.
    CHECK(fs::exists(fs::path(plot_dir) / "loss_curve.svg"));

    SUBCASE("a log with no data rows is an IO error") {
        const std::string empty_log = tmp.file("empty.csv");
        testsupport::write_file(
            empty_log,
            "episode,steps,outcome,ep_reward_low,ep_reward_high,loss_q,loss_c1,loss_c2,"
            "loss_actor,epsilon\n");
        const auto bad = run_navbench("plot " + shell_quote(empty_log) + " -o " +
                                      shell_quote(tmp.file("p2")));
        CHECK(bad.code == 4);
        CHECK(bad.err.find("no data rows") != std::string::npos);
    }
    SUBCASE("a missing log is an IO error") {
        CHECK(run_navbench("plot " + shell_quote(tmp.file("nope.csv")) + " -o " +
                           shell_quote(tmp.file("p3")))
                  .code == 4);
    }
}

TEST_CASE("cli: bench compares checkpoints against scripted baselines") {
    testsupport::TempDir tmp;
    const std::string a = train_into(tmp, "a", "td3", 4, 5);
    const std::string b = train_into(tmp, "b", "td3", 4, 5);  // same seed: same parameters
    const std::string out = tmp.file("bench");

    const auto r = run_navbench(
        "bench --checkpoint first=" + shell_quote((fs::path(a) / "checkpoint.ckpt").string()) +
        " --checkpoint second=" + shell_quote((fs::path(b) / "checkpoint.ckpt").string()) +
        " --episodes 4 --seed 3 -o " + shell_quote(out));
    INFO("stderr: " << r.err);
    CHECK(r.code == 0);
    CHECK(r.out.find("benchmark over") != std::string::npos);
    CHECK(fs::exists(fs::path(out) / "bench.txt"));

    const io::CsvTable table = io::read_csv((fs::path(out) / "bench.csv").string());
    CHECK(table.header.at(0) == "config");
    REQUIRE(table.rows.size() == 5);  // two checkpoints + three scripted baselines

    std::vector<std::string> names;
    for (const auto& row : table.rows) names.push_back(row.at(0));
    CHECK(names[0] == "first");
    CHECK(names[1] == "second");
    CHECK(std::find(names.begin(), names.end(), "steer_to_goal") != names.end());
    CHECK(std::find(names.begin(), names.end(), "always_forward") != names.end());
    CHECK(std::find(names.begin(), names.end(), "random") != names.end());

    // Identical parameters under a shared evaluation seed score identically.
    for (size_t col = 1; col < table.header.size(); ++col) {
        INFO("column " << table.header[col]);
        CHECK(table.rows[0].at(col) == table.rows[1].at(col));
    }
}

TEST_CASE("cli: output directory comes from flag, then environment, then config") {
    testsupport::TempDir tmp;
    const std::string cfg_dir = tmp.file("cfgout");
    const std::string env_dir = tmp.file("envout");
    const std::string flag_dir = tmp.file("flagout");
    const std::string cfg = tmp.file("config.json");
    testsupport::write_file(cfg, small_config(cfg_dir, "td3", 2, 1));

    const std::string env_prefix = "NAVBENCH_OUTPUT_DIR=" + shell_quote(env_dir) + " ";

    // Environment beats the config value when no flag is given.
    const auto r_env = run_navbench("train -c " + shell_quote(cfg), env_prefix);
    INFO("stderr: " << r_env.err);
    CHECK(r_env.code == 0);
    CHECK(fs::exists(fs::path(env_dir) / "train_log.csv"));
    CHECK_FALSE(fs::exists(fs::path(cfg_dir) / "train_log.csv"));

    // An explicit flag beats the environment.
    const auto r_flag =
        run_navbench("train -c " + shell_quote(cfg) + " -o " + shell_quote(flag_dir), env_prefix);
    CHECK(r_flag.code == 0);
    CHECK(fs::exists(fs::path(flag_dir) / "train_log.csv"));
}

TEST_CASE("cli: periodic checkpoints and resume reproduce an unbroken run") {
    testsupport::TempDir tmp;

    // Reference run: 6 episodes straight through.
    const std::string full = train_into(tmp, "full", "td3", 6, 9);

    // Interrupted run: stop after 3 episodes, then resume to the same budget.
    const std::string half_dir = tmp.file("half");
    const std::string half_cfg = tmp.file("half_config.json");
    testsupport::write_file(half_cfg, small_config(half_dir, "td3", 6, 9));
    const auto r_half =
        run_navbench("train -c " + shell_quote(half_cfg) + " --episodes 3 --checkpoint-every 3");
    INFO("stderr: " << r_half.err);
    REQUIRE(r_half.code == 0);
    CHECK(fs::exists(fs::path(half_dir) / "checkpoint.ckpt"));

    const std::string resumed_dir = tmp.file("resumed");
    const auto r_resume = run_navbench(
        "train -c " + shell_quote(half_cfg) + " --episodes 6 --init-from " +
        shell_quote((fs::path(half_dir) / "checkpoint.ckpt").string()) + " -o " +
        shell_quote(resumed_dir));
    INFO("stderr: " << r_resume.err);
    REQUIRE(r_resume.code == 0);

    CHECK(testsupport::read_file((fs::path(resumed_dir) / "checkpoint.ckpt").string()) ==
          testsupport::read_file((fs::path(full) / "checkpoint.ckpt").string()));

    // Mid-run snapshots appear only at the requested interval, not at the end.
    const std::string every_dir = tmp.file("every");
    const std::string every_cfg = tmp.file("every_config.json");
    testsupport::write_file(every_cfg, small_config(every_dir, "td3", 4, 2));
    REQUIRE(run_navbench("train -c " + shell_quote(every_cfg) + " --checkpoint-every 2").code == 0);
    CHECK(fs::exists(fs::path(every_dir) / "checkpoint_ep2.ckpt"));
    CHECK_FALSE(fs::exists(fs::path(every_dir) / "checkpoint_ep4.ckpt"));
    CHECK(fs::exists(fs::path(every_dir) / "checkpoint.ckpt"));
}
