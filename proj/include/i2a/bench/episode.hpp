// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "i2a/core/error.hpp"
#include "i2a/core/modality.hpp"
#include "i2a/core/random.hpp"
#include "i2a/llm/gateway.hpp"
#include "i2a/policy/interpreter.hpp"
#include "i2a/policy/runtime.hpp"
#include "i2a/prompt/prompt.hpp"
#include "i2a/sim/success.hpp"
#include "i2a/sim/task.hpp"

namespace i2a::bench {

enum class FailureCategory { none, parse, lint, retrieval, execution, scoring };

inline constexpr std::array kFailureCategories = {FailureCategory::parse, FailureCategory::lint,
                                                  FailureCategory::retrieval, FailureCategory::execution,
                                                  FailureCategory::scoring};

inline std::string_view to_string(FailureCategory c)
{
    switch (c) {
    case FailureCategory::none: return "none";
    case FailureCategory::parse: return "parse";
    case FailureCategory::lint: return "lint";
    case FailureCategory::retrieval: return "retrieval";
    case FailureCategory::execution: return "execution";
    case FailureCategory::scoring: return "scoring";
    }
    return "?";
}

/// What a pointing episode shows the user before waiting for clicks.
struct PointRequest {
    std::string episode_id;
    std::string instruction;
    Image observation;
};

struct PointReply {
    std::vector<PixelPoint> points;
    /// Replaces the instruction text when the user edited it before clicking.
    std::optional<std::string> instruction;
};

/// Returns the user's clicks, or nothing when the user never answered.
using PointProvider = std::function<std::optional<PointReply>(const PointRequest&)>;

struct EpisodeConfig {
    llm::LlmMode mode = llm::LlmMode::oracle;
    prompt::PromptArm prompt_arm = prompt::PromptArm::full;
    bool step_trigger = false;
    int max_trials = 3;
    Modality modality = Modality::multimodal;
    policy::PerceptionToggles perception;
    llm::Backends backends;
    /// Where failure snapshots go; none disables them.
    std::optional<std::filesystem::path> failure_dir;
    /// Where before/after perception panels go; none disables them.
    std::optional<std::filesystem::path> perception_dump;
    /// Pointing modality only; defaults to clicking the centre of each referenced object.
    PointProvider points;
};

struct EpisodeResult {
    sim::MetaTask meta_task{};
    sim::Level level{};
    std::uint64_t seed = 0;
    bool success = false;
    /// True when the episode ended in an exception rather than a finished run.
    bool errored = false;
    FailureCategory category = FailureCategory::none;
    std::string reason;
    int trials = 0;
    int actions_executed = 0;
    std::string program;
    double elapsed_ms = 0.0;
};

namespace detail {

inline bool is_retrieval_failure(const RuntimeApiError& e)
{
    static const std::set<std::string> apis = {"SAM", "ImageCrop", "CLIPRetrieval", "get_objs_match"};
    static const std::set<std::string> kinds = {"AllExcluded", "EmptyCrop", "UnparsableQuery", "EmptyScene"};
    return apis.count(e.api()) || kinds.count(e.inner_kind());
}

/// Simulated user: clicks the centre pixel of every object the instruction refers to.
inline std::vector<PixelPoint> scripted_clicks(const sim::TaskInstance& task, const CameraTransform& cam)
{
    return *prompt::bundle_for(task, Modality::pointing, cam).points;
}

} // namespace detail

inline std::string episode_id(const sim::TaskInstance& t)
{
    return std::string(sim::short_name(t.meta_task)) + "-" + std::string(sim::to_string(t.level)) + "-" +
           std::to_string(t.seed);
}

/// One pass of instruction, prompt, generation, execution and scoring.
/// Never throws for episode-level failures; they are reported in the result.
inline EpisodeResult run_episode(const sim::TaskInstance& task, const EpisodeConfig& cfg)
{
    const auto t0 = std::chrono::steady_clock::now();
    EpisodeResult r;
    r.meta_task = task.meta_task;
    r.level = task.level;
    r.seed = task.seed;
    auto fail = [&r](FailureCategory c, std::string reason, bool errored) {
        r.success = false;
        r.category = c;
        r.reason = std::move(reason);
        r.errored = errored;
    };

    sim::WorldState world = task.initial_world;
    prompt::EnvironmentCache cache;
    cache.bounds = world.bounds;
    policy::EpisodeContext ctx;
    ctx.world = &world;
    ctx.cache = &cache;
    ctx.perception = cfg.perception;
    if (ctx.perception.config.noise.enabled())
        ctx.perception.config.noise.seed = derive_seed({cfg.perception.config.noise.seed, task.seed,
                                                        std::uint64_t(task.meta_task), std::uint64_t(task.level)});
    ctx.perception_dump = cfg.perception_dump;
    ctx.dump_prefix = episode_id(task);
    if (cfg.failure_dir)
        ctx.failure_sink = {cfg.failure_dir, std::string(sim::short_name(task.meta_task)), task.seed};

    try {
        const auto bundle = prompt::bundle_for(task, cfg.modality, cache.camera);
        std::string text = prompt::normalize_instruction(bundle, cache);
        if (cfg.modality == Modality::pointing) {
            const PointRequest req{episode_id(task), text, sim::render_observation(world, {true, cache.camera})};
            auto reply = cfg.points ? cfg.points(req) : std::optional(PointReply{detail::scripted_clicks(task, cache.camera), {}});
            if (!reply) {
                fail(FailureCategory::execution, "no_user_input", false);
                r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
                return r;
            }
            if (reply->instruction)
                text = *reply->instruction;
            ctx.points = std::move(reply->points);
        }

        auto opts = prompt::options_for(cfg.prompt_arm);
        opts.step_trigger = cfg.step_trigger;
        llm::GenerationRequest req{prompt::build_prompt(text, opts), cfg.mode, cfg.max_trials, 0.0, cfg.modality,
                                   &task};
        const auto gen = llm::generate_program(req, cfg.backends);
        r.trials = gen.trials;
        r.program = gen.source;

        const auto registry = policy::make_registry(ctx);
        const auto info = policy::execute_program(gen.program, registry);
        r.actions_executed = info.actions_executed;
        if (!info.success) {
            fail(FailureCategory::execution, info.error ? info.error->kind + ": " + info.error->message : "execution failed",
                 false);
        } else if (!sim::check_success(task, world)) {
            fail(FailureCategory::scoring, "goal not reached", false);
        } else {
            r.success = true;
        }
    } catch (const ExhaustedTrials& e) {
        r.trials = e.trials();
        fail(e.last_kind() == "Lint" ? FailureCategory::lint : FailureCategory::parse, e.what(), true);
    } catch (const RuntimeApiError& e) {
        fail(detail::is_retrieval_failure(e) ? FailureCategory::retrieval : FailureCategory::execution, e.what(), true);
    } catch (const UnboundName& e) {
        fail(FailureCategory::execution, e.what(), true);
    } catch (const ReturnTypeError& e) {
        fail(FailureCategory::execution, e.what(), true);
    } catch (const Error& e) {
        fail(FailureCategory::execution, e.what(), true);
    }
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

} // namespace i2a::bench
