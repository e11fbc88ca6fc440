// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "i2a/action/actions.hpp"
#include "i2a/core/codec.hpp"
#include "i2a/perception/debug.hpp"
#include "i2a/perception/pipeline.hpp"
#include "i2a/policy/interpreter.hpp"
#include "i2a/policy/lint.hpp"
#include "i2a/prompt/cache.hpp"
#include "i2a/retrieval/retrieval.hpp"
#include "i2a/sim/render.hpp"
#include "i2a/sim/world.hpp"

namespace i2a::policy {

struct PerceptionToggles {
    perception::PerceptionConfig config;
    bool preprocess = true;
    bool postprocess = true;
};

/// State the bound APIs read and write during one episode.
struct EpisodeContext {
    sim::WorldState* world = nullptr;
    prompt::EnvironmentCache* cache = nullptr;
    PerceptionToggles perception;
    /// Point prompts applied when segmenting the live observation.
    std::optional<std::vector<PixelPoint>> points;
    const retrieval::Embedder* embedder = &retrieval::default_embedder();
    action::FailureSink failure_sink;
    action::StagingOptions staging;
    /// Before/after perception panels are written here, named <dump_prefix>_sam<n>.png.
    std::optional<std::filesystem::path> perception_dump;
    std::string dump_prefix = "episode";

    // Filled while the program runs.
    std::optional<std::filesystem::path> failure_image;
    struct Match {
        perception::MaskSet goal_masks;
        std::vector<int> rows, cols;
    };
    std::optional<Match> last_match;
    int sam_calls = 0;
};

namespace detail {

inline Tool tool_arg(const Args& a)
{
    return a.has("tool") ? tool_from_string(expect<std::string>(a.at("tool"), "tool")) : Tool::suction;
}

inline std::vector<RobotAction> action_list(const Value& v)
{
    if (const auto* a = v.get_if<RobotAction>())
        return {*a};
    std::vector<RobotAction> out;
    for (const auto& e : *expect<ListPtr>(v, "action"))
        out.push_back(expect<RobotAction>(e, "action list element"));
    return out;
}

inline Value actions_value(const std::vector<RobotAction>& acts)
{
    List l;
    for (const auto& a : acts)
        l.push_back(Value(a));
    return make_list(std::move(l));
}

inline const BinaryMask& mask_at(const perception::MaskSet& ms, int i)
{
    if (i < 0 || std::size_t(i) >= ms.size())
        throw IndexMismatch("object index " + std::to_string(i) + " out of range");
    return ms.masks[std::size_t(i)];
}

} // namespace detail

/// Binds the eleven policy APIs to the simulator, perception, retrieval and
/// action modules. The context must outlive the registry.
inline ApiRegistry make_registry(EpisodeContext& ctx)
{
    using perception::CropResult;
    using perception::MaskSet;
    using perception::ObjectCrop;
    ApiRegistry r;
    auto& world = *ctx.world;
    auto& cache = *ctx.cache;

    r.constants["obs"] = Value(Handle{"obs"});
    r.constants["templates"] = Value(Handle{"templates"});
    r.constants["BOUNDS"] = Value(cache.bounds);
    r.constants["pi"] = Value(std::numbers::pi);
    r.cache_get = [&cache](const std::string& key) -> Value {
        return std::visit([](const auto& a) { return Value(a); }, cache.get(key));
    };
    auto save_failure = [&ctx, &world]() -> std::string {
        ctx.failure_image = ctx.failure_sink.save(world, world.step_count);
        return ctx.failure_image ? ctx.failure_image->string() : std::string();
    };
    r.on_failure = [save_failure] { save_failure(); };

    r.apis["GetObsImage"] = {api_params("GetObsImage"), [&](const Args&) {
                                 cache.observation = sim::render_observation(world, {true, cache.camera});
                                 return Value(cache.observation);
                             }};
    r.apis["SaveFailureImage"] = {api_params("SaveFailureImage"), [save_failure](const Args&) { return Value(save_failure()); }};
    r.apis["SAM"] = {api_params("SAM"), [&](const Args& a) {
                         const Image& img = expect<Image>(a.at("image"), "image");
                         const auto& pc = ctx.perception;
                         std::optional<std::vector<PixelPoint>> pts;
                         if (ctx.points && img == cache.observation)
                             pts = ctx.points;
                         const Image input = pc.preprocess ? perception::preprocess_image(img, pc.config) : img;
                         MaskSet ms = perception::propose_masks(input, pts, pc.config);
                         if (pc.postprocess)
                             ms = perception::postprocess_masks(ms, pc.config);
                         if (ctx.perception_dump) {
                             std::filesystem::create_directories(*ctx.perception_dump);
                             const auto raw = perception::propose_masks(img, pts, pc.config);
                             write_png(*ctx.perception_dump /
                                           (ctx.dump_prefix + "_sam" + std::to_string(ctx.sam_calls) + ".png"),
                                       perception::before_after_panel(img, raw, input, ms));
                         }
                         ++ctx.sam_calls;
                         return Value(std::move(ms));
                     }};
    r.apis["ImageCrop"] = {api_params("ImageCrop"), [](const Args& a) {
                               const Image& img = expect<Image>(a.at("image"), "image");
                               const MaskSet& ms = expect<MaskSet>(a.at("masks"), "masks");
                               CropResult cr = perception::crop_objects(img, ms);
                               MaskSet masks = cr.masks;
                               return make_list({Value(std::move(cr)), Value(std::move(masks))});
                           }};
    r.apis["CLIPRetrieval"] = {api_params("CLIPRetrieval"), [&ctx](const Args& a) {
                                   const auto& objs = expect<CropResult>(a.at("objs"), "objs");
                                   const Value& q = a.at("query");
                                   retrieval::Query query;
                                   if (const auto* s = q.get_if<std::string>())
                                       query = *s;
                                   else if (const auto* c = q.get_if<ObjectCrop>())
                                       query = *c;
                                   else
                                       query = expect<Image>(q, "query");
                                   std::set<int> excl;
                                   for (const char* k : {"pre_obj1", "pre_obj2"})
                                       if (a.has(k))
                                           excl.insert(as_index(a.at(k), k));
                                   return Value(double(retrieval::retrieve(objs.crops, query, excl, *ctx.embedder)));
                               }};
    r.apis["get_objs_match"] = {api_params("get_objs_match"), [&ctx](const Args& a) {
                                    const auto& l1 = expect<CropResult>(a.at("objs_list1"), "objs_list1");
                                    const auto& l2 = expect<CropResult>(a.at("objs_list2"), "objs_list2");
                                    const auto m = retrieval::match_objects(l1.crops, l2.crops, *ctx.embedder);
                                    ctx.last_match = EpisodeContext::Match{l1.masks, m.rows, m.cols};
                                    List rows, cols;
                                    for (int i : m.rows)
                                        rows.push_back(Value(i));
                                    for (int j : m.cols)
                                        cols.push_back(Value(j));
                                    return make_list({make_list(std::move(rows)), make_list(std::move(cols))});
                                }};
    r.apis["Pixel2Loc"] = {api_params("Pixel2Loc"), [](const Args& a) {
                               const auto& ms = expect<MaskSet>(a.at("masks"), "masks");
                               return Value(action::pixel_to_loc(detail::mask_at(ms, as_index(a.at("obj"), "obj"))));
                           }};
    r.apis["PickPlace"] = {api_params("PickPlace"), [&cache](const Args& a) {
                               const auto& pick = expect<PixelPoint>(a.at("pick"), "pick");
                               const auto& place = expect<PixelPoint>(a.at("place"), "place");
                               const auto& b = expect<WorkspaceBounds>(a.at("bounds"), "bounds");
                               std::optional<double> yaw;
                               if (a.has("yaw_angle_degree"))
                                   yaw = as_number(a.at("yaw_angle_degree"), "yaw_angle_degree");
                               return Value(action::pick_place(pick, place, b, cache.camera, yaw, detail::tool_arg(a)));
                           }};
    r.apis["DistractorActions"] = {
        api_params("DistractorActions"), [&ctx, &cache](const Args& a) {
            const auto& obs = expect<MaskSet>(a.at("mask_obs"), "mask_obs");
            const auto matched = as_index_list(a.at("obj_list"), "obj_list");
            std::vector<BinaryMask> goal;
            if (ctx.last_match) {
                const auto& m = *ctx.last_match;
                for (std::size_t k = 0; k < m.cols.size(); ++k)
                    if (std::find(matched.begin(), matched.end(), m.cols[k]) != matched.end())
                        goal.push_back(detail::mask_at(m.goal_masks, m.rows[k]));
            }
            return detail::actions_value(action::distractor_actions(obs, matched, goal, cache.camera, cache.bounds,
                                                                    ctx.staging, detail::tool_arg(a)));
        }};
    r.apis["RearrangeActions"] = {api_params("RearrangeActions"),
                                  [&cache](const Args& a) {
                                      return detail::actions_value(action::rearrange_actions(
                                          expect<MaskSet>(a.at("pick_masks"), "pick_masks"),
                                          expect<MaskSet>(a.at("place_masks"), "place_masks"),
                                          as_index_list(a.at("pick_ind"), "pick_ind"),
                                          as_index_list(a.at("place_ind"), "place_ind"),
                                          expect<WorkspaceBounds>(a.at("bounds"), "bounds"), cache.camera,
                                          detail::tool_arg(a)));
                                  }};
    r.apis["RobotExecution"] = {api_params("RobotExecution"), [&ctx, &world](const Args& a) {
                                    auto info = action::robot_execution(detail::action_list(a.at("action")), world,
                                                                        ctx.failure_sink);
                                    if (info.failure_image_path)
                                        ctx.failure_image = info.failure_image_path;
                                    return Value(std::move(info));
                                }};
    return r;
}

} // namespace i2a::policy
