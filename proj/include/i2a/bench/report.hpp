// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "i2a/bench/episode.hpp"
#include "i2a/core/random.hpp"

namespace i2a::bench {

using json = nlohmann::json;

struct RunConfig {
    std::vector<sim::MetaTask> tasks{sim::kAllMetaTasks.begin(), sim::kAllMetaTasks.end()};
    std::vector<sim::Level> levels{sim::kAllLevels.begin(), sim::kAllLevels.end()};
    int episodes_per_cell = 20;
    std::vector<std::uint64_t> seeds{0, 1, 2};
    EpisodeConfig episode;
    /// Per-episode records are written here as episodes.jsonl when set.
    std::optional<std::filesystem::path> output_dir;

    void validate() const
    {
        if (tasks.empty() || levels.empty() || seeds.empty())
            throw Error("run needs at least one task, level and seed");
        if (episodes_per_cell < 1)
            throw Error("episodes_per_cell must be at least 1");
        if (episode.max_trials < 1)
            throw Error("max_trials must be at least 1");
        episode.perception.config.validate();
    }
};

/// Task instance for one episode of a cell; seeds are generator roots.
inline sim::TaskInstance episode_task(sim::MetaTask mt, sim::Level lvl, std::uint64_t root, int episode)
{
    return sim::generate_task(mt, lvl, derive_seed({root, std::uint64_t(episode)}));
}

struct CellStats {
    int episodes = 0;
    int successes = 0;
    int failures = 0; ///< finished runs that missed the goal
    int errors = 0;   ///< runs that ended in an exception
    int trials = 0;
    std::map<FailureCategory, int> taxonomy;

    double success_rate() const { return episodes ? 100.0 * successes / episodes : 0.0; }

    void add(const EpisodeResult& r)
    {
        ++episodes;
        trials += r.trials;
        if (r.success) {
            ++successes;
            return;
        }
        ++(r.errored ? errors : failures);
        ++taxonomy[r.category];
    }
};

struct RunReport {
    std::vector<sim::MetaTask> tasks;
    std::vector<sim::Level> levels;
    std::map<std::pair<sim::MetaTask, sim::Level>, CellStats> cells;
    json config;
    double wall_clock_s = 0.0;

    const CellStats& cell(sim::MetaTask t, sim::Level l) const { return cells.at({t, l}); }

    /// Mean of the per-cell success rates.
    double average() const
    {
        double sum = 0.0;
        for (const auto& [_, c] : cells)
            sum += c.success_rate();
        return cells.empty() ? 0.0 : sum / double(cells.size());
    }

    double task_average(sim::MetaTask t) const
    {
        double sum = 0.0;
        for (auto l : levels)
            sum += cell(t, l).success_rate();
        return sum / double(levels.size());
    }

    double level_average(sim::Level l) const
    {
        double sum = 0.0;
        for (auto t : tasks)
            sum += cell(t, l).success_rate();
        return sum / double(tasks.size());
    }

    std::map<FailureCategory, int> taxonomy() const
    {
        std::map<FailureCategory, int> out;
        for (const auto& [_, c] : cells)
            for (const auto& [k, v] : c.taxonomy)
                out[k] += v;
        return out;
    }

    /// Everything except timing; identical runs give identical bytes.
    json canonical_json() const
    {
        auto tax = [](const std::map<FailureCategory, int>& m) {
            json j = json::object();
            for (auto c : kFailureCategories)
                j[std::string(to_string(c))] = m.count(c) ? m.at(c) : 0;
            return j;
        };
        json jc = json::array();
        for (auto t : tasks)
            for (auto l : levels) {
                const auto& c = cell(t, l);
                jc.push_back({{"task", sim::to_string(t)},
                              {"level", sim::to_string(l)},
                              {"episodes", c.episodes},
                              {"successes", c.successes},
                              {"failures", c.failures},
                              {"errors", c.errors},
                              {"trials", c.trials},
                              {"success_rate", c.success_rate()},
                              {"failure_taxonomy", tax(c.taxonomy)}});
            }
        return {{"schema", "i2a.report/v1"},
                {"config", config},
                {"cells", jc},
                {"average_success_rate", average()},
                {"failure_taxonomy", tax(taxonomy())}};
    }

    json to_json() const
    {
        json j = canonical_json();
        j["wall_clock_s"] = wall_clock_s;
        return j;
    }

    /// Levels as rows, tasks as columns, with an average column.
    std::string to_markdown() const
    {
        auto fmt = [](double v) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "%.1f", v);
            return std::string(buf);
        };
        std::string md = "| Level |";
        std::string rule = "|---|";
        for (auto t : tasks) {
            md += " Task " + std::string(sim::to_string(t).substr(1, 2)) + " |";
            rule += "---|";
        }
        md += " **Average** |\n" + rule + "---|\n";
        for (auto l : levels) {
            md += "| " + std::string(sim::to_string(l)) + " |";
            for (auto t : tasks)
                md += " " + fmt(cell(t, l).success_rate()) + " |";
            md += " " + fmt(level_average(l)) + " |\n";
        }
        md += "| All |";
        for (auto t : tasks)
            md += " " + fmt(task_average(t)) + " |";
        md += " **" + fmt(average()) + "** |\n";
        return md;
    }
};

inline json config_json(const RunConfig& cfg)
{
    json tasks = json::array(), levels = json::array();
    for (auto t : cfg.tasks)
        tasks.push_back(sim::to_string(t));
    for (auto l : cfg.levels)
        levels.push_back(sim::to_string(l));
    const auto& p = cfg.episode.perception;
    return {{"tasks", tasks},
            {"levels", levels},
            {"episodes_per_cell", cfg.episodes_per_cell},
            {"seeds", cfg.seeds},
            {"mode", llm::to_string(cfg.episode.mode)},
            {"prompt_arm", prompt::to_string(cfg.episode.prompt_arm)},
            {"modality", to_string(cfg.episode.modality)},
            {"max_trials", cfg.episode.max_trials},
            {"noise", p.config.noise.enabled()},
            {"noise_seed", p.config.noise.seed},
            {"preprocess", p.preprocess},
            {"postprocess", p.postprocess}};
}

inline json episode_json(const EpisodeResult& r)
{
    return {{"task", sim::to_string(r.meta_task)}, {"level", sim::to_string(r.level)},
            {"seed", r.seed},                      {"success", r.success},
            {"errored", r.errored},                {"category", to_string(r.category)},
            {"reason", r.reason},                  {"trials", r.trials},
            {"actions_executed", r.actions_executed}};
}

using ProgressFn = std::function<void(const EpisodeResult&)>;

/// Runs every cell; episode failures are tallied, never propagated.
inline RunReport run_benchmark(const RunConfig& cfg, const ProgressFn& progress = {})
{
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    rep.tasks = cfg.tasks;
    rep.levels = cfg.levels;
    rep.config = config_json(cfg);
    std::ofstream log;
    if (cfg.output_dir) {
        std::filesystem::create_directories(*cfg.output_dir);
        log.open(*cfg.output_dir / "episodes.jsonl");
    }
    for (auto t : cfg.tasks)
        for (auto l : cfg.levels) {
            auto& cell = rep.cells[{t, l}];
            for (auto root : cfg.seeds)
                for (int e = 0; e < cfg.episodes_per_cell; ++e) {
                    EpisodeResult r;
                    try {
                        r = run_episode(episode_task(t, l, root, e), cfg.episode);
                    } catch (const std::exception& ex) {
                        r.meta_task = t;
                        r.level = l;
                        r.errored = true;
                        r.category = FailureCategory::execution;
                        r.reason = ex.what();
                    }
                    cell.add(r);
                    if (log)
                        log << episode_json(r).dump() << "\n";
                    if (progress)
                        progress(r);
                }
        }
    rep.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace i2a::bench
