// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <set>

#include "i2a/sim/render.hpp"
#include "i2a/sim/success.hpp"
#include "i2a/sim/task.hpp"
#include "i2a/sim/task_json.hpp"

using namespace i2a;
using namespace i2a::sim;

namespace {

WorldObject make_object(int id, Shape shape, Color c, double x, double y, double yaw = 0.0)
{
    WorldObject o;
    o.id = id;
    o.shape = shape;
    o.texture = {TextureKind::solid, c, std::nullopt};
    o.pose = {x, y, yaw};
    o.layer = is_container(shape) ? 0 : 1;
    return o;
}

// Independent oracle: counts non-table pixels and their mean coordinate.
struct Blob {
    std::size_t count = 0;
    double cx = 0, cy = 0;
};

Blob foreground_blob(const Image& img, Rgb table, Rgb ignore)
{
    Blob b;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (!(img.at(x, y) == table) && !(img.at(x, y) == ignore)) {
                ++b.count;
                b.cx += x;
                b.cy += y;
            }
    if (b.count) {
        b.cx /= double(b.count);
        b.cy /= double(b.count);
    }
    return b;
}

} // namespace

TEST(Render, EmptyWorldIsUniformTable)
{
    WorldState w;
    const Image img = render_observation(w);
    ASSERT_EQ(img.width(), 256);
    for (const auto& p : img.pixels())
        EXPECT_EQ(p, kTableColor);
}

TEST(Render, CenteredBlockCentroidAtImageCenter)
{
    WorldState w;
    w.objects.push_back(make_object(1, Shape::block, Color::red, 0.5, 0.0));
    const Image img = render_observation(w, {.shadows = false});
    const Blob b = foreground_blob(img, kTableColor, kTableColor);
    ASSERT_GT(b.count, 100u);
    EXPECT_NEAR(b.cx, 128.0, 1.0);
    EXPECT_NEAR(b.cy, 128.0, 1.0);

    // Shadow pass leaves the object region intact and only adds shadow-colored pixels.
    const Image shaded = render_observation(w);
    const Blob obj = foreground_blob(shaded, kTableColor, shadow_color());
    EXPECT_EQ(obj.count, b.count);
    EXPECT_EQ(img, render_observation(w, {.shadows = false}));
}

TEST(Render, ShadowIsOffsetCopy)
{
    WorldState w;
    w.objects.push_back(make_object(1, Shape::round, Color::blue, 0.4, 0.1));
    const Image plain = render_observation(w, {.shadows = false});
    const Image shaded = render_observation(w);
    for (int y = 0; y < 256; ++y)
        for (int x = 0; x < 256; ++x) {
            if (!(shaded.at(x, y) == shadow_color()))
                continue;
            ASSERT_GE(x - kShadowOffsetPx, 0);
            ASSERT_GE(y - kShadowOffsetPx, 0);
            EXPECT_EQ(plain.at(x - kShadowOffsetPx, y - kShadowOffsetPx), palette(Color::blue));
        }
}

TEST(Render, PatternedTextureKeepsPrimaryDominant)
{
    for (auto kind : {TextureKind::stripe, TextureKind::polka_dot, TextureKind::checkerboard, TextureKind::paisley}) {
        WorldState w;
        auto o = make_object(1, Shape::container, Color::green, 0.5, 0.0);
        o.texture = {kind, Color::green, Color::purple};
        w.objects.push_back(o);
        const Image img = render_observation(w, {.shadows = false});
        std::size_t prim = 0, sec = 0;
        for (const auto& p : img.pixels()) {
            prim += p == palette(Color::green);
            sec += p == palette(Color::purple);
        }
        EXPECT_GT(sec, 0u) << to_string(kind);
        EXPECT_GT(10 * prim, 18 * sec) << to_string(kind);
    }
}

TEST(Render, LabelsFollowLayers)
{
    WorldState w;
    w.objects.push_back(make_object(1, Shape::block, Color::red, 0.5, 0.0));
    w.objects.push_back(make_object(2, Shape::container, Color::blue, 0.5, 0.0));
    w.objects[1].layer = 0;
    const auto labels = render_labels(w);
    EXPECT_EQ(labels[128 * 256 + 128], 0);
    const auto mask = render_object_mask(w, 2);
    EXPECT_FALSE(mask.test(128, 128));
    EXPECT_GT(mask.count(), 0u);
}

TEST(Step, PickOnEmptyTableDoesNothing)
{
    WorldState w;
    w.objects.push_back(make_object(1, Shape::block, Color::red, 0.5, 0.0));
    auto r = step(w, {{0.3, 0.4}, {0.6, 0.1}, 0.0, Tool::suction});
    EXPECT_FALSE(r.picked);
    EXPECT_EQ(r.world.poses(), w.poses());
    EXPECT_EQ(r.world.history.size(), 1u);
    EXPECT_EQ(r.world.step_count, 1);
}

TEST(Step, PickAtCentroidMovesToPlace)
{
    WorldState w;
    w.objects.push_back(make_object(1, Shape::block, Color::red, 0.5, 0.0));
    auto r = step(w, {{0.5, 0.0}, {0.6, 0.1}, 0.0, Tool::suction});
    EXPECT_TRUE(r.picked);
    EXPECT_DOUBLE_EQ(r.world.objects[0].pose.x, 0.6);
    EXPECT_DOUBLE_EQ(r.world.objects[0].pose.y, 0.1);
    EXPECT_DOUBLE_EQ(r.world.objects[0].pose.yaw, 0.0);
}

TEST(Step, RotationInPlace)
{
    WorldState w;
    w.objects.push_back(make_object(1, Shape::block, Color::red, 0.5, 0.0, 300.0));
    auto r = step(w, {{0.5, 0.0}, {0.5, 0.0}, 150.0, Tool::suction});
    EXPECT_TRUE(r.picked);
    EXPECT_DOUBLE_EQ(r.world.objects[0].pose.x, 0.5);
    EXPECT_DOUBLE_EQ(r.world.objects[0].pose.yaw, 90.0);
}

TEST(Step, OutOfBoundsRaises)
{
    WorldState w;
    EXPECT_THROW(step(w, {{0.1, 0.0}, {0.5, 0.0}, 0.0, Tool::suction}), OutOfBounds);
    EXPECT_THROW(step(w, {{0.5, 0.0}, {0.5, 0.7}, 0.0, Tool::suction}), OutOfBounds);
}

TEST(Step, ClampedActionsNeverRaiseAndConserveObjects)
{
    Rng rng(99);
    WorldState w = generate_task(MetaTask::T04_rearrange, Level::L1, 3).initial_world;
    const auto n = w.objects.size();
    for (int i = 0; i < 10000; ++i) {
        const Vec2 pick = w.bounds.clamp({rng.uniform(-1, 2), rng.uniform(-2, 2)});
        const Vec2 place = w.bounds.clamp({rng.uniform(-1, 2), rng.uniform(-2, 2)});
        ASSERT_NO_THROW(apply_action(w, {pick, place, rng.uniform(-180, 180), Tool::suction}));
    }
    EXPECT_EQ(w.objects.size(), n);
    EXPECT_EQ(w.history.size(), std::size_t(w.step_count));
}

TEST(Tasks, GenerationIsDeterministic)
{
    for (auto t : kAllMetaTasks)
        for (auto l : kAllLevels) {
            const auto a = generate_task(t, l, 7);
            const auto b = generate_task(t, l, 7);
            EXPECT_EQ(a, b);
            EXPECT_EQ(render_observation(a.initial_world), render_observation(b.initial_world));
        }
}

TEST(Tasks, T01Structure)
{
    const auto t = generate_task(MetaTask::T01_visual_manipulation, Level::L1, 7);
    const auto n = t.initial_world.objects.size();
    EXPECT_GE(n, 3u);
    EXPECT_LE(n, 4u);
    ASSERT_TRUE(t.goal.dragged_id);
    ASSERT_EQ(t.goal.base_ids.size(), 1u);
    EXPECT_TRUE(is_container(t.initial_world.get(t.goal.base_ids[0]).shape));
    EXPECT_EQ(t.instruction.multimodal_text, "Put the {dragged_obj} into the {base_obj}.");
    EXPECT_EQ(t.instruction.pure_text, "Put " + describe(t.initial_world.get(*t.goal.dragged_id)) + " into " +
                                           describe(t.initial_world.get(t.goal.base_ids[0])) + ".");
}

TEST(Tasks, T03YawDeltaFromTable)
{
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto t = generate_task(MetaTask::T03_rotation, Level::L1, s);
        ASSERT_TRUE(t.goal.target_yaw_delta);
        const int d = int(*t.goal.target_yaw_delta);
        EXPECT_TRUE(d % 30 == 0 && d >= 30 && d <= 150) << d;
        EXPECT_TRUE(t.goal.base_ids.empty());
    }
}

TEST(Tasks, InvariantsAcrossSeeds)
{
    for (auto t : kAllMetaTasks)
        for (auto l : kAllLevels)
            for (std::uint64_t s = 0; s < 40; ++s) {
                const auto task = generate_task(t, l, s);
                const auto& w = task.initial_world;
                std::set<int> ids;
                for (const auto& o : w.objects) {
                    ids.insert(o.id);
                    EXPECT_TRUE(o.texture.valid());
                    EXPECT_GT(polygon_area(world_footprint(o)), 0.0);
                    for (const auto& v : world_footprint(o))
                        EXPECT_TRUE(w.bounds.contains(v));
                }
                EXPECT_EQ(ids.size(), w.objects.size());
                for (std::size_t i = 0; i < w.objects.size(); ++i)
                    for (std::size_t j = i + 1; j < w.objects.size(); ++j) {
                        const auto& a = w.objects[i];
                        const auto& b = w.objects[j];
                        EXPECT_FALSE(a.shape == b.shape && a.texture == b.texture);
                        EXPECT_TRUE(generator::separated(polygon_bounds(world_footprint(a)),
                                                         polygon_bounds(world_footprint(b)), 0.0));
                    }
                if (task.goal.dragged_id)
                    EXPECT_TRUE(w.find(*task.goal.dragged_id));
                for (int id : task.goal.base_ids)
                    EXPECT_TRUE(w.find(id));
                for (const auto& g : task.goal.target_poses)
                    EXPECT_TRUE(w.find(g.id));
                if (t == MetaTask::T04_rearrange || t == MetaTask::T05_rearrange_restore)
                    EXPECT_GT(w.objects.size(), task.goal.target_poses.size());
            }
}

TEST(Tasks, LevelShapeSetsAndCombinations)
{
    std::set<Shape> l12, l3;
    for (auto s : generator::dragged_shapes(Level::L1))
        l12.insert(s);
    for (auto s : generator::container_shapes(Level::L1))
        l12.insert(s);
    for (auto s : generator::dragged_shapes(Level::L3))
        l3.insert(s);
    for (auto s : generator::container_shapes(Level::L3))
        l3.insert(s);
    for (auto s : l3)
        EXPECT_EQ(l12.count(s), 0u);
    EXPECT_EQ(l12.size() + l3.size(), kShapeCount);

    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        for (const auto& o : generate_task(MetaTask::T01_visual_manipulation, Level::L1, seed).initial_world.objects)
            EXPECT_FALSE(generator::held_out_combination(o.shape, o.texture.kind, o.texture.primary));
        for (const auto& o : generate_task(MetaTask::T01_visual_manipulation, Level::L2, seed).initial_world.objects)
            EXPECT_TRUE(generator::held_out_combination(o.shape, o.texture.kind, o.texture.primary));
        for (const auto& o : generate_task(MetaTask::T01_visual_manipulation, Level::L3, seed).initial_world.objects)
            EXPECT_EQ(l3.count(o.shape), 1u);
    }
}

TEST(Tasks, JsonRoundTrip)
{
    for (auto t : kAllMetaTasks) {
        const auto task = generate_task(t, Level::L2, 11);
        const auto j = to_json(task);
        EXPECT_TRUE(j.contains("objects"));
        EXPECT_TRUE(j.contains("goal"));
        auto back = task_from_json(json::parse(j.dump()));
        EXPECT_EQ(back.initial_world.objects, task.initial_world.objects);
        EXPECT_EQ(back.goal, task.goal);
        EXPECT_EQ(back.instruction, task.instruction);
    }
}

TEST(Tasks, JsonRejectsDanglingGoal)
{
    auto j = to_json(generate_task(MetaTask::T01_visual_manipulation, Level::L1, 1));
    j["goal"]["dragged_id"] = 999;
    EXPECT_THROW(task_from_json(j), Error);
}

namespace {

TaskInstance rotation_task(double target)
{
    TaskInstance t;
    t.meta_task = MetaTask::T03_rotation;
    t.initial_world.objects.push_back(make_object(1, Shape::block, Color::red, 0.5, 0.0));
    t.goal.dragged_id = 1;
    t.goal.target_yaw_delta = target;
    return t;
}

} // namespace

TEST(Success, RotationTolerance)
{
    const auto t = rotation_task(150);
    auto w = t.initial_world;
    apply_action(w, {{0.5, 0.0}, {0.5, 0.0}, 150.0, Tool::suction});
    EXPECT_TRUE(check_success(t, w));

    auto w2 = t.initial_world;
    apply_action(w2, {{0.5, 0.0}, {0.5, 0.0}, 130.0, Tool::suction});
    EXPECT_FALSE(check_success(t, w2));

    auto w3 = t.initial_world;
    apply_action(w3, {{0.5, 0.0}, {0.53, 0.0}, 150.0, Tool::suction});
    EXPECT_FALSE(check_success(t, w3));
}

TEST(Success, PlacementInsideBase)
{
    TaskInstance t;
    t.meta_task = MetaTask::T01_visual_manipulation;
    t.initial_world.objects = {make_object(1, Shape::block, Color::red, 0.4, -0.2),
                               make_object(2, Shape::pan, Color::blue, 0.6, 0.2)};
    t.goal.dragged_id = 1;
    t.goal.base_ids = {2};
    EXPECT_FALSE(check_success(t, t.initial_world));
    auto w = t.initial_world;
    apply_action(w, {{0.4, -0.2}, {0.6, 0.2}, 0.0, Tool::suction});
    EXPECT_TRUE(check_success(t, w));
}

TEST(Success, RearrangeThenRestoreOverHistory)
{
    TaskInstance t;
    t.meta_task = MetaTask::T05_rearrange_restore;
    t.initial_world.objects = {make_object(1, Shape::block, Color::red, 0.35, -0.3),
                               make_object(2, Shape::star, Color::green, 0.65, 0.3),
                               make_object(3, Shape::round, Color::blue, 0.5, 0.0)};
    t.goal.target_poses = {{1, {0.35, 0.3, 0.0}}, {2, {0.65, -0.3, 0.0}}};
    t.goal.restore = true;

    auto w = t.initial_world;
    apply_action(w, {{0.35, -0.3}, {0.35, 0.3}, 0.0, Tool::suction});
    apply_action(w, {{0.65, 0.3}, {0.65, -0.3}, 0.0, Tool::suction});
    EXPECT_FALSE(check_success(t, w)); // goal reached but not restored
    apply_action(w, {{0.35, 0.3}, {0.35, -0.3}, 0.0, Tool::suction});
    apply_action(w, {{0.65, -0.3}, {0.65, 0.3}, 0.0, Tool::suction});
    EXPECT_TRUE(check_success(t, w));

    TaskInstance t4 = t;
    t4.meta_task = MetaTask::T04_rearrange;
    EXPECT_FALSE(check_success(t4, w));

    // Restoring without ever reaching the goal fails.
    auto idle = t.initial_world;
    apply_action(idle, {{0.5, 0.0}, {0.5, 0.0}, 0.0, Tool::suction});
    EXPECT_FALSE(check_success(t, idle));
}

TEST(Success, PickOrderRestore)
{
    TaskInstance t;
    t.meta_task = MetaTask::T17_pick_order_restore;
    t.initial_world.objects = {make_object(1, Shape::block, Color::red, 0.5, 0.0),
                               make_object(2, Shape::pan, Color::blue, 0.4, -0.3),
                               make_object(3, Shape::container, Color::green, 0.6, 0.3)};
    t.goal.dragged_id = 1;
    t.goal.base_ids = {2, 3};
    t.goal.restore = true;

    auto good = t.initial_world;
    apply_action(good, {{0.5, 0.0}, {0.4, -0.3}, 0.0, Tool::suction});
    apply_action(good, {{0.4, -0.3}, {0.6, 0.3}, 0.0, Tool::suction});
    apply_action(good, {{0.6, 0.3}, {0.5, 0.0}, 0.0, Tool::suction});
    EXPECT_TRUE(check_success(t, good));
    EXPECT_EQ(container_visits(good, 1), (std::vector<int>{2, 3}));

    auto swapped = t.initial_world;
    apply_action(swapped, {{0.5, 0.0}, {0.6, 0.3}, 0.0, Tool::suction});
    apply_action(swapped, {{0.6, 0.3}, {0.4, -0.3}, 0.0, Tool::suction});
    apply_action(swapped, {{0.4, -0.3}, {0.5, 0.0}, 0.0, Tool::suction});
    EXPECT_FALSE(check_success(t, swapped));
}
