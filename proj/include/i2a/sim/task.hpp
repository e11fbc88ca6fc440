// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "i2a/core/error.hpp"
#include "i2a/core/random.hpp"
#include "i2a/sim/world.hpp"

namespace i2a::sim {

enum class MetaTask {
    T01_visual_manipulation,
    T02_scene_understanding,
    T03_rotation,
    T04_rearrange,
    T05_rearrange_restore,
    T17_pick_order_restore,
};

enum class Level { L1, L2, L3 };

inline constexpr std::array kAllMetaTasks = {MetaTask::T01_visual_manipulation, MetaTask::T02_scene_understanding,
                                             MetaTask::T03_rotation,            MetaTask::T04_rearrange,
                                             MetaTask::T05_rearrange_restore,   MetaTask::T17_pick_order_restore};
inline constexpr std::array kAllLevels = {Level::L1, Level::L2, Level::L3};

inline std::string_view to_string(MetaTask t)
{
    switch (t) {
    case MetaTask::T01_visual_manipulation: return "T01_visual_manipulation";
    case MetaTask::T02_scene_understanding: return "T02_scene_understanding";
    case MetaTask::T03_rotation: return "T03_rotation";
    case MetaTask::T04_rearrange: return "T04_rearrange";
    case MetaTask::T05_rearrange_restore: return "T05_rearrange_restore";
    case MetaTask::T17_pick_order_restore: return "T17_pick_order_restore";
    }
    return "?";
}

/// "T01", "T17", ...
inline std::string_view short_name(MetaTask t) { return to_string(t).substr(0, 3); }

inline std::string_view to_string(Level l)
{
    switch (l) {
    case Level::L1: return "L1";
    case Level::L2: return "L2";
    case Level::L3: return "L3";
    }
    return "?";
}

/// Accepts both the short ("T03") and the long ("T03_rotation") spelling.
inline MetaTask meta_task_from_string(std::string_view s)
{
    for (auto t : kAllMetaTasks)
        if (s == to_string(t) || s == short_name(t))
            return t;
    throw Error("unknown meta task '" + std::string(s) + "'");
}

inline Level level_from_string(std::string_view s)
{
    for (auto l : kAllLevels)
        if (s == to_string(l))
            return l;
    throw Error("unknown level '" + std::string(s) + "'");
}

struct GoalPose {
    int id = 0;
    Pose pose;
    friend bool operator==(const GoalPose&, const GoalPose&) = default;
};

struct GoalSpec {
    std::optional<int> dragged_id;
    std::vector<int> base_ids; ///< visit order for T17
    std::optional<double> target_yaw_delta;
    std::vector<GoalPose> target_poses;
    bool restore = false;

    friend bool operator==(const GoalSpec&, const GoalSpec&) = default;
};

enum class AssetKind { object_crop, scene };

/// Recipe for an instruction asset; rendered on demand.
struct AssetSpec {
    std::string key;
    AssetKind kind = AssetKind::object_crop;
    int object_id = -1;                     ///< object_crop
    std::vector<WorldObject> scene_objects; ///< scene

    friend bool operator==(const AssetSpec&, const AssetSpec&) = default;
};

struct TaskInstruction {
    std::string pure_text;       ///< objects described in words
    std::string multimodal_text; ///< objects referenced by {placeholder}
    std::vector<AssetSpec> assets;
    std::vector<int> pointing_ids; ///< objects a user would click in pointing mode

    friend bool operator==(const TaskInstruction&, const TaskInstruction&) = default;
};

struct TaskInstance {
    MetaTask meta_task = MetaTask::T01_visual_manipulation;
    Level level = Level::L1;
    std::uint64_t seed = 0;
    TaskInstruction instruction;
    GoalSpec goal;
    WorldState initial_world;

    friend bool operator==(const TaskInstance&, const TaskInstance&) = default;
};

/// "the yellow and purple polka dot pan", "the red block"
inline std::string describe(const WorldObject& o)
{
    std::string s = "the ";
    s += to_string(o.texture.primary);
    if (o.texture.secondary) {
        s += " and ";
        s += to_string(*o.texture.secondary);
        s += " ";
        s += texture_phrase(o.texture.kind);
    }
    s += " ";
    s += shape_noun(o.shape);
    return s;
}

/// Shape-agnostic description: "the yellow and blue stripe object".
inline std::string describe_texture(const WorldObject& o)
{
    std::string s = "the ";
    s += to_string(o.texture.primary);
    if (o.texture.secondary) {
        s += " and ";
        s += to_string(*o.texture.secondary);
        s += " ";
        s += texture_phrase(o.texture.kind);
    }
    s += " object";
    return s;
}

namespace generator {

inline const std::vector<Shape>& dragged_shapes(Level l)
{
    static const std::vector<Shape> seen = {Shape::block, Shape::round, Shape::letter_L, Shape::star};
    static const std::vector<Shape> novel = {Shape::letter_T, Shape::flower};
    return l == Level::L3 ? novel : seen;
}

inline const std::vector<Shape>& container_shapes(Level l)
{
    static const std::vector<Shape> seen = {Shape::pan, Shape::container};
    static const std::vector<Shape> novel = {Shape::bowl, Shape::frame};
    return l == Level::L3 ? novel : seen;
}

/// Shape x texture x primary combinations reserved for L2.
inline bool held_out_combination(Shape s, TextureKind k, Color primary)
{
    const auto key = std::uint64_t(s) * 1000 + std::uint64_t(k) * 100 + std::uint64_t(primary);
    return mix_seed(key ^ 0x51ED270B27ULL) % 3 == 0;
}

inline constexpr double kMinGap = 0.04;
inline constexpr double kEdgeMargin = 0.02;

inline AxisBox footprint_box(Shape s, const Pose& p) { return polygon_bounds(world_footprint(s, p)); }

inline bool separated(const AxisBox& a, const AxisBox& b, double gap)
{
    const double gx = std::max(a.x_min - b.x_max, b.x_min - a.x_max);
    const double gy = std::max(a.y_min - b.y_max, b.y_min - a.y_max);
    return std::max(gx, gy) >= gap;
}

struct Sampler {
    Level level;
    Rng& rng;
    std::vector<WorldObject> taken; // used to enforce (shape, texture) distinctness
    int next_id = 1;

    template <typename Pred>
    WorldObject object(const std::vector<Shape>& shapes, Pred&& accept)
    {
        for (int attempt = 0; attempt < 5000; ++attempt) {
            WorldObject o;
            o.shape = rng.pick(shapes);
            o.texture.kind = kAllTextures[std::size_t(rng.uniform_int(0, int(kTextureCount) - 1))];
            o.texture.primary = kAllColors[std::size_t(rng.uniform_int(0, int(kColorCount) - 1))];
            if (o.texture.kind != TextureKind::solid) {
                Color sec;
                do
                    sec = kAllColors[std::size_t(rng.uniform_int(0, int(kColorCount) - 1))];
                while (sec == o.texture.primary);
                o.texture.secondary = sec;
            }
            if (level != Level::L3) {
                const bool held = held_out_combination(o.shape, o.texture.kind, o.texture.primary);
                if (held != (level == Level::L2))
                    continue;
            }
            bool duplicate = false;
            for (const auto& t : taken)
                duplicate = duplicate || (t.shape == o.shape && t.texture == o.texture);
            if (duplicate || !accept(o))
                continue;
            o.id = next_id++;
            taken.push_back(o);
            return o;
        }
        throw Error("object sampler exhausted");
    }

    WorldObject object(const std::vector<Shape>& shapes)
    {
        return object(shapes, [](const WorldObject&) { return true; });
    }
};

/// Samples a position for `shape` clear of every box in `occupied`.
inline std::optional<Pose> place(Rng& rng, Shape shape, const std::vector<AxisBox>& occupied,
                                 const WorkspaceBounds& bounds)
{
    const AxisBox local = polygon_bounds(footprint(shape));
    const double x0 = bounds.x_min + kEdgeMargin - local.x_min, x1 = bounds.x_max - kEdgeMargin - local.x_max;
    const double y0 = bounds.y_min + kEdgeMargin - local.y_min, y1 = bounds.y_max - kEdgeMargin - local.y_max;
    for (int attempt = 0; attempt < 400; ++attempt) {
        Pose p{rng.uniform(x0, x1), rng.uniform(y0, y1), 0.0};
        const AxisBox box = footprint_box(shape, p);
        bool ok = true;
        for (const auto& b : occupied)
            ok = ok && separated(box, b, kMinGap);
        if (ok)
            return p;
    }
    return std::nullopt;
}

} // namespace generator

/// Deterministic task factory: identical arguments give identical instances.
inline TaskInstance generate_task(MetaTask meta_task, Level level, std::uint64_t seed)
{
    using namespace generator;
    const WorkspaceBounds bounds = default_bounds();

    for (std::uint64_t round = 0;; ++round) {
        Rng rng(derive_seed({0x1A2B'7A5CULL, std::uint64_t(meta_task), std::uint64_t(level), seed, round}));
        Sampler sampler{level, rng, {}, 1};
        TaskInstance task;
        task.meta_task = meta_task;
        task.level = level;
        task.seed = seed;
        WorldState& world = task.initial_world;
        world.bounds = bounds;
        std::vector<AxisBox> occupied;
        bool failed = false;

        auto put = [&](WorldObject o) -> WorldObject* {
            auto pose = place(rng, o.shape, occupied, bounds);
            if (!pose) {
                failed = true;
                return nullptr;
            }
            o.pose = *pose;
            o.layer = is_container(o.shape) ? 0 : 1;
            occupied.push_back(footprint_box(o.shape, o.pose));
            world.objects.push_back(o);
            return &world.objects.back();
        };
        auto any_shape = [&] {
            std::vector<Shape> all = dragged_shapes(level);
            const auto& c = container_shapes(level);
            all.insert(all.end(), c.begin(), c.end());
            return all;
        };
        auto distractors = [&](int lo, int hi) {
            const int n = rng.uniform_int(lo, hi);
            for (int i = 0; i < n && !failed; ++i)
                put(sampler.object(any_shape()));
        };

        TaskInstruction& ins = task.instruction;
        switch (meta_task) {
        case MetaTask::T01_visual_manipulation: {
            const WorldObject dragged = sampler.object(dragged_shapes(level));
            const WorldObject base = sampler.object(container_shapes(level));
            put(dragged);
            put(base);
            distractors(1, 2);
            task.goal.dragged_id = dragged.id;
            task.goal.base_ids = {base.id};
            ins.pure_text = "Put " + describe(dragged) + " into " + describe(base) + ".";
            ins.multimodal_text = "Put the {dragged_obj} into the {base_obj}.";
            ins.assets = {{"dragged_obj", AssetKind::object_crop, dragged.id, {}},
                          {"base_obj", AssetKind::object_crop, base.id, {}}};
            ins.pointing_ids = {dragged.id, base.id};
            break;
        }
        case MetaTask::T02_scene_understanding: {
            const WorldObject dragged = sampler.object(dragged_shapes(level));
            const WorldObject base = sampler.object(container_shapes(level), [&](const WorldObject& o) {
                return o.texture.kind == TextureKind::solid && o.texture.primary != dragged.texture.primary;
            });
            put(dragged);
            put(base);
            const int n = rng.uniform_int(1, 2);
            for (int i = 0; i < n && !failed; ++i)
                put(sampler.object(any_shape(), [&](const WorldObject& o) {
                    return o.texture.primary != base.texture.primary;
                }));
            // The scene shows the target among other, differently textured objects.
            std::vector<WorldObject> scene;
            std::vector<AxisBox> scene_boxes;
            auto scene_put = [&](WorldObject o) {
                auto pose = place(rng, o.shape, scene_boxes, bounds);
                if (!pose) {
                    failed = true;
                    return;
                }
                o.pose = *pose;
                o.layer = 1;
                scene_boxes.push_back(footprint_box(o.shape, o.pose));
                scene.push_back(o);
            };
            scene_put(dragged);
            const int m = rng.uniform_int(1, 2);
            for (int i = 0; i < m && !failed; ++i)
                scene_put(sampler.object(any_shape(),
                                         [&](const WorldObject& o) { return !(o.texture == dragged.texture); }));
            task.goal.dragged_id = dragged.id;
            task.goal.base_ids = {base.id};
            ins.pure_text = ins.multimodal_text =
                "Put " + describe_texture(dragged) + " in {scene} into " + describe_texture(base) + ".";
            ins.assets = {{"scene", AssetKind::scene, -1, scene}};
            ins.pointing_ids = {dragged.id, base.id};
            break;
        }
        case MetaTask::T03_rotation: {
            const WorldObject dragged = sampler.object(dragged_shapes(level));
            put(dragged);
            distractors(1, 2);
            const int degrees = 30 * rng.uniform_int(1, 5);
            task.goal.dragged_id = dragged.id;
            task.goal.target_yaw_delta = double(degrees);
            ins.pure_text = "Rotate " + describe(dragged) + " " + std::to_string(degrees) + " degrees.";
            ins.multimodal_text = "Rotate the {dragged_obj} " + std::to_string(degrees) + " degrees.";
            ins.assets = {{"dragged_obj", AssetKind::object_crop, dragged.id, {}}};
            ins.pointing_ids = {dragged.id};
            break;
        }
        case MetaTask::T04_rearrange:
        case MetaTask::T05_rearrange_restore: {
            const int k = rng.uniform_int(2, 3);
            std::vector<int> targets;
            for (int i = 0; i < k && !failed; ++i)
                if (auto* o = put(sampler.object(dragged_shapes(level))))
                    targets.push_back(o->id);
            const bool conflict = rng.bernoulli(0.5);
            if (!conflict)
                distractors(1, 1);
            if (failed)
                break;
            // Goal poses keep clear of every initial object and of each other.
            std::vector<AxisBox> blocked = occupied;
            for (int id : targets) {
                const Shape s = world.get(id).shape;
                auto pose = place(rng, s, blocked, bounds);
                if (!pose) {
                    failed = true;
                    break;
                }
                blocked.push_back(footprint_box(s, *pose));
                task.goal.target_poses.push_back({id, *pose});
            }
            if (failed)
                break;
            if (conflict) {
                // Park a distractor on top of one goal pose.
                const auto& g = task.goal.target_poses[std::size_t(rng.uniform_int(0, k - 1))];
                WorldObject d = sampler.object(dragged_shapes(level));
                d.pose = {g.pose.x, g.pose.y, 0.0};
                d.layer = 1;
                const AxisBox box = footprint_box(d.shape, d.pose);
                const bool inside = box.x_min >= bounds.x_min + kEdgeMargin && box.x_max <= bounds.x_max - kEdgeMargin &&
                                    box.y_min >= bounds.y_min + kEdgeMargin && box.y_max <= bounds.y_max - kEdgeMargin;
                bool clear = inside;
                for (const auto& b : occupied)
                    clear = clear && separated(box, b, kMinGap);
                for (const auto& other : task.goal.target_poses)
                    if (other.id != g.id)
                        clear = clear && separated(box, footprint_box(world.get(other.id).shape, other.pose), kMinGap);
                if (!clear) {
                    failed = true;
                    break;
                }
                occupied.push_back(box);
                world.objects.push_back(d);
            }
            std::vector<WorldObject> scene;
            for (const auto& g : task.goal.target_poses) {
                WorldObject o = world.get(g.id);
                o.pose = g.pose;
                scene.push_back(o);
            }
            task.goal.restore = meta_task == MetaTask::T05_rearrange_restore;
            ins.pure_text = ins.multimodal_text =
                task.goal.restore ? "Rearrange to this {scene} then restore." : "Rearrange to this {scene}.";
            ins.assets = {{"scene", AssetKind::scene, -1, scene}};
            for (const auto& o : world.objects)
                ins.pointing_ids.push_back(o.id);
            break;
        }
        case MetaTask::T17_pick_order_restore: {
            const WorldObject dragged = sampler.object(dragged_shapes(level));
            const WorldObject base1 = sampler.object(container_shapes(level));
            const WorldObject base2 = sampler.object(container_shapes(level));
            put(dragged);
            put(base1);
            put(base2);
            distractors(0, 1);
            task.goal.dragged_id = dragged.id;
            task.goal.base_ids = {base1.id, base2.id};
            task.goal.restore = true;
            ins.pure_text = "Put " + describe(dragged) + " into " + describe(base1) + " then " + describe(base2) +
                            ". Finally restore it into its original container.";
            ins.multimodal_text = "Put the {dragged_obj} into the {base_obj_1} then {base_obj_2}. Finally restore it "
                                  "into its original container.";
            ins.assets = {{"dragged_obj", AssetKind::object_crop, dragged.id, {}},
                          {"base_obj_1", AssetKind::object_crop, base1.id, {}},
                          {"base_obj_2", AssetKind::object_crop, base2.id, {}}};
            ins.pointing_ids = {dragged.id, base1.id, base2.id};
            break;
        }
        }
        if (!failed)
            return task;
    }
}

} // namespace i2a::sim
