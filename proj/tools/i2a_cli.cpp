// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "i2a/bench/report.hpp"
#include "i2a/bench/service.hpp"
#include "i2a/llm/cassette.hpp"
#include "i2a/llm/live.hpp"
#include "i2a/policy/ast_json.hpp"
#include "i2a/policy/lint.hpp"
#include "i2a/policy/parser.hpp"
#include "i2a/policy/printer.hpp"
#include "i2a/sim/render.hpp"
#include "i2a/sim/task_json.hpp"

using namespace i2a;

namespace {

std::vector<std::string> split_csv(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty())
            out.push_back(item);
    return out;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path);
    out << text;
}

bool on_off(const std::string& v) { return v == "on"; }

/// Flags shared by `run` and `serve`.
struct SweepOptions {
    std::string tasks = "T01,T02,T03,T04,T05,T17";
    std::string levels = "L1,L2,L3";
    std::string seeds = "0,1,2";
    int episodes = 20;
    bool full = false;
    std::string mode = "oracle";
    std::string prompt_arm = "full";
    bool step_trigger = false;
    int max_trials = 3;
    std::string noise = "off";
    std::uint64_t noise_seed = 7;
    std::string pre = "on";
    std::string post = "on";
    std::string cassette;
    std::string record;
    std::string out;
    std::string markdown;
    std::string log_dir;
    std::string failure_dir;
    std::string dump_perception;
    bool quiet = false;

    void add(CLI::App* app)
    {
        const auto onoff = CLI::IsMember({"on", "off"});
        app->add_option("--tasks", tasks, "Comma separated meta tasks, e.g. T01,T03")->capture_default_str();
        app->add_option("--levels", levels, "Comma separated levels")->capture_default_str();
        app->add_option("--seeds", seeds, "Comma separated generator roots")->capture_default_str();
        app->add_option("--episodes", episodes, "Episodes per seed and cell")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_flag("--full", full, "Use 150 episodes per seed and cell");
        app->add_option("--mode", mode, "LLM mode")->check(CLI::IsMember({"oracle", "replay", "live"}))->capture_default_str();
        app->add_option("--prompt-arm", prompt_arm, "Prompt sections")
            ->check(CLI::IsMember({"full", "api_only", "examples_only"}))
            ->capture_default_str();
        app->add_flag("--step-trigger", step_trigger, "Append the step by step line to the prompt");
        app->add_option("--max-trials", max_trials, "Generation attempts per episode")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--noise", noise, "Calibrated segmentation noise")->check(onoff)->capture_default_str();
        app->add_option("--noise-seed", noise_seed, "Root seed for segmentation noise")->capture_default_str();
        app->add_option("--pre-process", pre, "Image pre-processing")->check(onoff)->capture_default_str();
        app->add_option("--post-process", post, "Mask post-processing")->check(onoff)->capture_default_str();
        app->add_option("--cassette", cassette, "Recorded replies for replay mode");
        app->add_option("--record", record, "Write live replies to this cassette");
        app->add_option("--out", out, "Write the JSON report here");
        app->add_option("--markdown", markdown, "Write the Markdown table here instead of stdout");
        app->add_option("--log-dir", log_dir, "Write episodes.jsonl here");
        app->add_option("--failure-dir", failure_dir, "Write failure snapshots here");
        app->add_option("--dump-perception", dump_perception, "Write before/after perception panels here");
        app->add_flag("-q,--quiet", quiet, "No per-episode progress on stderr");
    }

    std::unique_ptr<llm::Cassette> replay_tape;
    std::unique_ptr<llm::Cassette> record_tape;
    std::unique_ptr<llm::LiveClient> live;

    bench::RunConfig build(Modality modality)
    {
        bench::RunConfig cfg;
        cfg.tasks.clear();
        for (const auto& t : split_csv(tasks))
            cfg.tasks.push_back(sim::meta_task_from_string(t));
        cfg.levels.clear();
        for (const auto& l : split_csv(levels))
            cfg.levels.push_back(sim::level_from_string(l));
        cfg.seeds.clear();
        for (const auto& s : split_csv(seeds))
            cfg.seeds.push_back(std::stoull(s));
        cfg.episodes_per_cell = full ? 150 : episodes;

        auto& ep = cfg.episode;
        ep.mode = llm::llm_mode_from_string(mode);
        ep.prompt_arm = prompt::prompt_arm_from_string(prompt_arm);
        ep.step_trigger = step_trigger;
        ep.max_trials = max_trials;
        ep.modality = modality;
        if (on_off(noise))
            ep.perception.config.noise = perception::NoiseSpec::calibrated(noise_seed);
        ep.perception.preprocess = on_off(pre);
        ep.perception.postprocess = on_off(post);
        if (!failure_dir.empty())
            ep.failure_dir = failure_dir;
        if (!dump_perception.empty())
            ep.perception_dump = dump_perception;
        if (!log_dir.empty())
            cfg.output_dir = log_dir;

        if (ep.mode == llm::LlmMode::replay) {
            if (cassette.empty())
                throw Error("replay mode needs --cassette");
            replay_tape = std::make_unique<llm::Cassette>(llm::Cassette::load(cassette));
            ep.backends.cassette = replay_tape.get();
        }
        if (ep.mode == llm::LlmMode::live) {
            live = std::make_unique<llm::LiveClient>(llm::LiveConfig::from_env());
            ep.backends.live = live.get();
            if (!record.empty()) {
                record_tape = std::make_unique<llm::Cassette>();
                ep.backends.recorder = record_tape.get();
            }
        }
        return cfg;
    }

    void progress(const bench::EpisodeResult& r) const
    {
        if (quiet)
            return;
        std::fprintf(stderr, "%s-%s seed=%llu %s%s%s\n", std::string(sim::short_name(r.meta_task)).c_str(),
                     std::string(sim::to_string(r.level)).c_str(), static_cast<unsigned long long>(r.seed),
                     r.success ? "ok" : std::string(bench::to_string(r.category)).c_str(), r.reason.empty() ? "" : " ",
                     r.reason.c_str());
    }

    void emit(const bench::RunReport& rep) const
    {
        if (!out.empty())
            write_text(out, rep.to_json().dump(2) + "\n");
        if (!markdown.empty())
            write_text(markdown, rep.to_markdown());
        else
            std::cout << rep.to_markdown();
        if (record_tape)
            record_tape->save(record);
        std::fprintf(stderr, "average %.1f over %zu cells in %.1f s\n", rep.average(), rep.cells.size(), rep.wall_clock_s);
    }
};

struct TaskOptions {
    std::string task = "T01";
    std::string level = "L1";
    std::uint64_t seed = 0;
    std::string modality = "multimodal";

    void add(CLI::App* app)
    {
        app->add_option("--task", task, "Meta task")->capture_default_str();
        app->add_option("--level", level, "Level")->capture_default_str();
        app->add_option("--seed", seed, "Generator seed")->capture_default_str();
        app->add_option("--modality", modality, "Instruction modality")
            ->check(CLI::IsMember({"pure_language", "multimodal", "pointing"}))
            ->capture_default_str();
    }

    sim::TaskInstance instance() const
    {
        return sim::generate_task(sim::meta_task_from_string(task), sim::level_from_string(level), seed);
    }
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Instruction to action benchmark"};
    app.require_subcommand(1);

    SweepOptions run_opts;
    std::string run_modality = "multimodal";
    auto* run = app.add_subcommand("run", "Sweep tasks and levels and print the success table");
    run_opts.add(run);
    run->add_option("--modality", run_modality, "Instruction modality; pointing uses scripted clicks")
        ->check(CLI::IsMember({"pure_language", "multimodal", "pointing"}))
        ->capture_default_str();

    SweepOptions serve_opts;
    serve_opts.episodes = 1;
    serve_opts.seeds = "0";
    std::string host = "127.0.0.1";
    int port = 8080;
    int idle_s = 300;
    auto* serve = app.add_subcommand("serve", "Run pointing episodes that wait for clicks over HTTP");
    serve_opts.add(serve);
    serve->add_option("--host", host, "Bind address")->capture_default_str();
    serve->add_option("--port", port, "Port, 0 for any")->capture_default_str();
    serve->add_option("--idle-timeout", idle_s, "Seconds to wait for points")->capture_default_str();

    TaskOptions prompt_task;
    std::string prompt_arm = "full";
    bool prompt_trigger = false;
    std::string prompt_text;
    auto* prompt_cmd = app.add_subcommand("prompt", "Print the prompt for a task instance or an instruction");
    prompt_task.add(prompt_cmd);
    prompt_cmd->add_option("--prompt-arm", prompt_arm, "Prompt sections")
        ->check(CLI::IsMember({"full", "api_only", "examples_only"}))
        ->capture_default_str();
    prompt_cmd->add_flag("--step-trigger", prompt_trigger, "Append the step by step line");
    prompt_cmd->add_option("--instruction", prompt_text, "Use this text instead of a generated task");

    std::string parse_file;
    std::string parse_modality = "multimodal";
    bool parse_pretty = false;
    auto* parse_cmd = app.add_subcommand("parse", "Parse and lint a policy program, print its AST as JSON");
    parse_cmd->add_option("file", parse_file, "Program source, - for stdin")->required();
    parse_cmd->add_option("--modality", parse_modality, "Lint against this modality")
        ->check(CLI::IsMember({"pure_language", "multimodal", "pointing"}))
        ->capture_default_str();
    parse_cmd->add_flag("--pretty", parse_pretty, "Print canonical source instead of JSON");

    TaskOptions task_opts;
    std::string task_png;
    bool task_oracle = false;
    auto* task_cmd = app.add_subcommand("task", "Print a generated task instance as JSON");
    task_opts.add(task_cmd);
    task_cmd->add_option("--png", task_png, "Also write the observation here");
    task_cmd->add_flag("--oracle", task_oracle, "Print the oracle program instead");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto cfg = run_opts.build(modality_from_string(run_modality));
            const auto rep = bench::run_benchmark(cfg, [&](const bench::EpisodeResult& r) { run_opts.progress(r); });
            run_opts.emit(rep);
        } else if (*serve) {
            bench::PointingService svc{std::chrono::seconds(idle_s)};
            auto cfg = serve_opts.build(Modality::pointing);
            cfg.episode.points = svc.provider();
            const int bound = svc.start(host, port);
            std::fprintf(stderr, "listening on http://%s:%d\n", host.c_str(), bound);
            const auto rep = bench::run_benchmark(cfg, [&](const bench::EpisodeResult& r) {
                svc.finish(r);
                serve_opts.progress(r);
            });
            serve_opts.emit(rep);
        } else if (*prompt_cmd) {
            auto opts = prompt::options_for(prompt::prompt_arm_from_string(prompt_arm));
            opts.step_trigger = prompt_trigger;
            std::string text = prompt_text;
            if (text.empty()) {
                const auto t = prompt_task.instance();
                prompt::EnvironmentCache cache;
                cache.bounds = t.initial_world.bounds;
                text = prompt::normalize_instruction(
                    prompt::bundle_for(t, modality_from_string(prompt_task.modality), cache.camera), cache);
            }
            std::cout << prompt::build_prompt(text, opts);
        } else if (*parse_cmd) {
            const std::string src = parse_file == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {})
                                                      : slurp(parse_file);
            const auto program = policy::parse_program(src);
            const auto report = policy::lint_program(program, modality_from_string(parse_modality));
            if (parse_pretty)
                std::cout << policy::pretty_print(program);
            else
                std::cout << policy::to_json(program).dump(2) << "\n";
            if (!report.clean()) {
                std::cerr << "lint: " << report.summary() << "\n";
                return 3;
            }
        } else if (*task_cmd) {
            const auto t = task_opts.instance();
            if (task_oracle)
                std::cout << llm::oracle_source(t, modality_from_string(task_opts.modality));
            else
                std::cout << sim::to_json(t).dump(2) << "\n";
            if (!task_png.empty())
                write_png(task_png, sim::render_observation(t.initial_world));
        }
    } catch (const ParseError& e) {
        std::cerr << e.kind() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
