#include "hrlnav/metrics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hrlnav/csvio.hpp"

namespace hrlnav::bench {

double path_efficiency(const std::vector<geom::Vec2>& trajectory, const geom::Vec2& start,
                       const geom::Vec2& goal) {
    if (trajectory.empty()) throw std::invalid_argument("path_efficiency: empty trajectory");
    double traveled = 0.0;
    for (size_t i = 1; i < trajectory.size(); ++i) {
        traveled += geom::distance(trajectory[i - 1], trajectory[i]);
    }
    traveled += geom::distance(trajectory.back(), goal);
    if (!(traveled > 0.0)) throw std::invalid_argument("path_efficiency: zero traveled length");
    return geom::distance(start, goal) / traveled;
}

double trajectory_smoothness(const std::vector<geom::Vec2>& trajectory) {
    if (trajectory.size() < 3) {
        throw std::invalid_argument("trajectory_smoothness: need at least 3 points");
    }
    std::vector<double> headings;
    headings.reserve(trajectory.size() - 1);
    for (size_t i = 1; i < trajectory.size(); ++i) {
        const geom::Vec2 d = trajectory[i] - trajectory[i - 1];
        if (d.norm() < 1e-12) continue;
        headings.push_back(geom::rad_to_deg(std::atan2(d.y, d.x)));
    }
    if (headings.size() < 2) {
        throw std::invalid_argument("trajectory_smoothness: fewer than 2 moving segments");
    }
    double sum = 0.0;
    for (size_t i = 1; i < headings.size(); ++i) {
        sum += std::abs(geom::wrap_deg(headings[i] - headings[i - 1]));
    }
    return 1.0 - (sum / static_cast<double>(headings.size() - 1)) / 180.0;
}

namespace {

std::vector<geom::Vec2> positions(const hier::EpisodeRecord& rec) {
    std::vector<geom::Vec2> p;
    p.reserve(rec.trajectory.size());
    for (const auto& t : rec.trajectory) p.push_back({t.x, t.y});
    return p;
}

EpisodeMetrics summarize_episode(int index, const hier::EpisodeRecord& rec, double dt) {
    EpisodeMetrics m;
    m.episode = index;
    m.outcome = rec.outcome;
    m.steps = rec.steps;
    m.reward_low = rec.reward_low;
    m.reward_high = rec.reward_high;
    const std::vector<geom::Vec2> path = positions(rec);
    if (rec.outcome == sim::Outcome::GoalReached) {
        m.time_to_goal = rec.steps * dt;
        m.path_efficiency = path_efficiency(path, rec.start, rec.goal);
    }
    if (rec.outcome != sim::Outcome::Timeout && path.size() >= 3) {
        try {
            m.smoothness = trajectory_smoothness(path);
        } catch (const std::invalid_argument&) {
            // Degenerate path (robot never moved twice); leave empty.
        }
    }
    return m;
}

MetricsReport aggregate(std::vector<EpisodeMetrics> rows) {
    MetricsReport rep;
    rep.episodes = static_cast<int>(rows.size());
    int successes = 0, collisions = 0, timeouts = 0;
    double time_sum = 0.0, eff_sum = 0.0, smooth_sum = 0.0;
    int eff_n = 0, smooth_n = 0;
    for (const auto& m : rows) {
        switch (m.outcome) {
            case sim::Outcome::GoalReached: successes += 1; break;
            case sim::Outcome::Collision: collisions += 1; break;
            case sim::Outcome::Timeout: timeouts += 1; break;
            case sim::Outcome::Running: break;
        }
        if (m.time_to_goal) time_sum += *m.time_to_goal;
        if (m.path_efficiency) {
            eff_sum += *m.path_efficiency;
            eff_n += 1;
        }
        if (m.smoothness) {
            smooth_sum += *m.smoothness;
            smooth_n += 1;
        }
    }
    if (rep.episodes > 0) {
        const double n = rep.episodes;
        rep.success_rate = successes / n;
        rep.collision_rate = collisions / n;
        rep.timeout_rate = timeouts / n;
    }
    if (successes > 0) rep.mean_time_to_goal = time_sum / successes;
    if (eff_n > 0) rep.mean_path_efficiency = eff_sum / eff_n;
    if (smooth_n > 0) rep.mean_smoothness = smooth_sum / smooth_n;
    rep.rows = std::move(rows);
    return rep;
}

template <typename RunOne>
MetricsReport run_eval(std::vector<sim::Environment>& envs, const EvalOptions& opt,
                       std::vector<hier::EpisodeRecord>* records, RunOne&& run_one) {
    if (envs.empty()) throw std::invalid_argument("evaluate: no worlds given");
    Rng seeder(opt.seed);
    Rng policy_rng(seeder.fork_seed());
    std::vector<EpisodeMetrics> rows;
    rows.reserve(static_cast<size_t>(opt.episodes));
    for (int e = 0; e < opt.episodes; ++e) {
        sim::Environment& env = envs[static_cast<size_t>(e) % envs.size()];
        const uint64_t episode_seed = seeder.fork_seed();
        hier::EpisodeRecord rec = run_one(env, episode_seed, policy_rng);
        rows.push_back(summarize_episode(e, rec, env.config().dt));
        if (records) records->push_back(std::move(rec));
    }
    return aggregate(std::move(rows));
}

}  // namespace

MetricsReport evaluate_flat(std::vector<sim::Environment>& envs, hier::LowPolicy& low,
                            const rewards::LowRewardWeights& lw, const EvalOptions& opt,
                            std::vector<hier::EpisodeRecord>* records) {
    return run_eval(envs, opt, records,
                    [&](sim::Environment& env, uint64_t seed, Rng& rng) {
                        return hier::run_flat_episode(env, low, lw, seed, rng, nullptr, true);
                    });
}

MetricsReport evaluate_hierarchy(std::vector<sim::Environment>& envs, hier::HighPolicy& high,
                                 hier::LowPolicy& low, const hier::HierarchyConfig& hcfg,
                                 const rewards::HighRewardWeights& hw,
                                 const rewards::LowRewardWeights& lw, const EvalOptions& opt,
                                 std::vector<hier::EpisodeRecord>* records) {
    return run_eval(envs, opt, records, [&](sim::Environment& env, uint64_t seed, Rng& rng) {
        return hier::run_episode(env, high, low, hcfg, hw, lw, seed, rng, nullptr, true);
    });
}

std::string report_csv(const MetricsReport& report) {
    std::ostringstream out;
    out << "episode,outcome,steps,reward_low,reward_high,time_to_goal,path_efficiency,smoothness\n";
    for (const auto& m : report.rows) {
        out << m.episode << ',' << sim::outcome_name(m.outcome) << ',' << m.steps << ','
            << io::csv_number(m.reward_low) << ',' << io::csv_number(m.reward_high) << ',';
        if (m.time_to_goal) out << io::csv_number(*m.time_to_goal);
        out << ',';
        if (m.path_efficiency) out << io::csv_number(*m.path_efficiency);
        out << ',';
        if (m.smoothness) out << io::csv_number(*m.smoothness);
        out << '\n';
    }
    return out.str();
}

std::string report_summary(const MetricsReport& report, const std::string& label) {
    std::ostringstream out;
    out << label << ": " << report.episodes << " episodes\n";
    out << "  success_rate    " << io::csv_number(report.success_rate) << "\n";
    out << "  collision_rate  " << io::csv_number(report.collision_rate) << "\n";
    out << "  timeout_rate    " << io::csv_number(report.timeout_rate) << "\n";
    out << "  time_to_goal    "
        << (report.mean_time_to_goal ? io::csv_number(*report.mean_time_to_goal) + " s" : "-")
        << "\n";
    out << "  path_efficiency "
        << (report.mean_path_efficiency ? io::csv_number(*report.mean_path_efficiency) : "-")
        << "\n";
    out << "  smoothness      "
        << (report.mean_smoothness ? io::csv_number(*report.mean_smoothness) : "-") << "\n";
    return out.str();
}

sim::Action SteerToGoalPolicy::select(const std::vector<double>& obs, Rng&) {
    const double bearing = obs[n_beams_ + 1];  // radians, heading-relative
    sim::Action a;
    a.angular = std::clamp(2.0 * bearing, -1.0, 1.0);
    a.linear = std::abs(bearing) < 0.3 ? 1.0 : 0.15;
    return a;
}

}  // namespace hrlnav::bench
