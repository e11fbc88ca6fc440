// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>

#include "i2a/action/actions.hpp"
#include "i2a/core/random.hpp"
#include "i2a/sim/success.hpp"
#include "i2a/sim/task.hpp"

using namespace i2a;
using namespace i2a::action;

namespace {

BinaryMask rect_mask(int x0, int y0, int x1, int y1, int size = 256)
{
    BinaryMask m(size, size);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            m.set(x, y);
    return m;
}

MaskSet object_masks(const sim::WorldState& w, const std::vector<int>& ids)
{
    MaskSet s;
    for (int id : ids)
        s.push(sim::render_object_mask(w, id));
    return s;
}

} // namespace

TEST(PixelToLoc, RoundsHalfUp)
{
    // Columns 0..1 average to 0.5, rows 2..5 to 3.5.
    EXPECT_EQ(pixel_to_loc(rect_mask(0, 2, 1, 5)), (PixelPoint{1, 4}));
    EXPECT_EQ(pixel_to_loc(rect_mask(10, 10, 10, 10)), (PixelPoint{10, 10}));
    // Mean of 0,0,1 is 1/3, rounds down.
    BinaryMask m(8, 8);
    m.set(0, 0);
    m.set(0, 1);
    m.set(1, 0);
    EXPECT_EQ(pixel_to_loc(m), (PixelPoint{0, 0}));
}

TEST(PixelToLoc, EmptyMaskThrows) { EXPECT_THROW(pixel_to_loc(BinaryMask(16, 16)), EmptyMask); }

TEST(ToRobot, MatchesAffineMap)
{
    const auto cam = default_camera();
    const auto b = default_bounds();
    for (int px : {0, 17, 128, 255})
        for (int py : {0, 99, 128, 255}) {
            const Vec2 q = to_robot(PixelPoint{px, py}, cam, b);
            EXPECT_DOUBLE_EQ(q.x, 0.25 + px * 0.5 / 256.0);
            EXPECT_DOUBLE_EQ(q.y, -0.5 + py / 256.0);
        }
}

TEST(ToRobot, ClampsIntoBounds)
{
    Rng rng(11);
    const auto b = default_bounds();
    for (int i = 0; i < 10000; ++i) {
        const Vec2 p{rng.uniform(-2000, 2000), rng.uniform(-2000, 2000)};
        const Vec2 q = to_robot(p, default_camera(), b);
        ASSERT_TRUE(b.contains(q, 0.0));
        const Vec2 raw = default_camera().apply(p);
        if (b.contains(raw, 0.0))
            ASSERT_EQ(q, raw);
    }
}

TEST(PickPlace, NormalizesYaw)
{
    const auto b = default_bounds();
    EXPECT_DOUBLE_EQ(pick_place({10, 10}, {20, 20}, b, default_camera(), 270.0).yaw_degrees, -90.0);
    EXPECT_DOUBLE_EQ(pick_place({10, 10}, {20, 20}, b, default_camera(), 180.0).yaw_degrees, 180.0);
    EXPECT_DOUBLE_EQ(pick_place({10, 10}, {20, 20}, b, default_camera(), -180.0).yaw_degrees, 180.0);
    EXPECT_DOUBLE_EQ(pick_place({10, 10}, {20, 20}, b).yaw_degrees, 0.0);
    EXPECT_EQ(pick_place({10, 10}, {20, 20}, b, default_camera(), std::nullopt, Tool::spatula).tool, Tool::spatula);
}

TEST(Rearrange, IndexChecks)
{
    MaskSet s;
    s.push(rect_mask(10, 10, 20, 20));
    const auto b = default_bounds();
    EXPECT_THROW(rearrange_actions(s, s, {0}, {0, 0}, b), IndexMismatch);
    EXPECT_THROW(rearrange_actions(s, s, {1}, {0}, b), IndexMismatch);
    EXPECT_THROW(rearrange_actions(s, s, {0}, {-1}, b), IndexMismatch);
    EXPECT_TRUE(rearrange_actions(s, s, {}, {}, b).empty());
}

TEST(Rearrange, LongestMoveFirst)
{
    MaskSet pick, place;
    pick.push(rect_mask(10, 10, 14, 14));
    pick.push(rect_mask(40, 40, 44, 44));
    pick.push(rect_mask(80, 80, 84, 84));
    place.push(rect_mask(20, 10, 24, 14));  // short
    place.push(rect_mask(200, 40, 204, 44)); // long
    place.push(rect_mask(80, 150, 84, 154)); // medium
    const auto acts = rearrange_actions(pick, place, {0, 1, 2}, {0, 1, 2}, default_bounds());
    ASSERT_EQ(acts.size(), 3u);
    const auto cam = default_camera();
    EXPECT_EQ(acts[0].pick, cam.apply({42, 42}));
    EXPECT_EQ(acts[1].pick, cam.apply({82, 82}));
    EXPECT_EQ(acts[2].pick, cam.apply({12, 12}));
    for (std::size_t i = 1; i < acts.size(); ++i)
        EXPECT_GE((acts[i - 1].place - acts[i - 1].pick).norm(), (acts[i].place - acts[i].pick).norm());
}

TEST(Staging, CellsArePerimeterOfGrid)
{
    const auto cells = staging_cells(default_bounds());
    ASSERT_EQ(cells.size(), 12u);
    for (const auto& c : cells) {
        const bool edge_x = std::abs(c.x - 0.3125) < 1e-12 || std::abs(c.x - 0.6875) < 1e-12;
        const bool edge_y = std::abs(c.y + 0.375) < 1e-12 || std::abs(c.y - 0.375) < 1e-12;
        EXPECT_TRUE(edge_x || edge_y);
    }
}

TEST(Distractor, OnlyConflictingObjectsMove)
{
    MaskSet obs;
    obs.push(rect_mask(100, 100, 110, 110)); // matched target
    obs.push(rect_mask(150, 150, 160, 160)); // sits on the goal
    obs.push(rect_mask(30, 200, 40, 210));   // out of the way
    const std::vector<BinaryMask> goal{rect_mask(152, 148, 162, 158)};
    const auto cam = default_camera();
    const auto acts = distractor_actions(obs, {0}, goal, cam, default_bounds());
    ASSERT_EQ(acts.size(), 1u);
    EXPECT_EQ(acts[0].pick, cam.apply({155, 155}));

    StagingOptions all;
    all.remove_all_unmatched = true;
    EXPECT_EQ(distractor_actions(obs, {0}, goal, cam, default_bounds(), all).size(), 2u);
    EXPECT_TRUE(distractor_actions(obs, {0, 1, 2}, goal, cam, default_bounds()).empty());
    EXPECT_THROW(distractor_actions(obs, {5}, goal, cam, default_bounds()), IndexMismatch);
}

TEST(Distractor, StagedSpotKeepsClearance)
{
    MaskSet obs;
    obs.push(rect_mask(100, 100, 110, 110));
    obs.push(rect_mask(150, 150, 160, 160));
    const std::vector<BinaryMask> goal{rect_mask(150, 150, 160, 160)};
    const auto cam = default_camera();
    const auto acts = distractor_actions(obs, {0}, goal, cam, default_bounds());
    ASSERT_EQ(acts.size(), 1u);
    const Vec2 dest = acts[0].place;
    // Oracle: brute-force distance from the destination to every other footprint pixel.
    const Vec2 from = acts[0].pick;
    double radius = 0;
    for (int y = 150; y <= 160; ++y)
        for (int x = 150; x <= 160; ++x)
            radius = std::max(radius, (cam.apply({double(x), double(y)}) - from).norm());
    for (const BinaryMask* m : std::vector<const BinaryMask*>{&obs.masks[0], &goal[0]})
        for (int y = 0; y < 256; ++y)
            for (int x = 0; x < 256; ++x)
                if (m->at(x, y))
                    ASSERT_GE((cam.apply({double(x), double(y)}) - dest).norm(), radius + 0.03);
}

TEST(Distractor, NoFreeSpaceWhenCrowded)
{
    MaskSet obs;
    obs.push(rect_mask(0, 0, 255, 255));
    obs.push(rect_mask(120, 120, 130, 130));
    const std::vector<BinaryMask> goal{rect_mask(120, 120, 130, 130)};
    EXPECT_THROW(distractor_actions(obs, {0}, goal, default_camera(), default_bounds()), NoFreeSpace);
}

TEST(Execution, StopsAtEmptyGraspAndSavesSnapshot)
{
    sim::WorldState w;
    sim::WorldObject o;
    o.id = 0;
    o.shape = sim::Shape::block;
    o.texture = {sim::TextureKind::solid, sim::Color::red, std::nullopt};
    o.pose = {0.5, 0.0, 0.0};
    o.layer = 1;
    w.objects.push_back(o);

    const std::vector<RobotAction> acts{
        {{0.5, 0.0}, {0.4, 0.1}, 0.0, Tool::suction},
        {{0.7, -0.4}, {0.5, 0.0}, 0.0, Tool::suction}, // empty table
        {{0.4, 0.1}, {0.5, 0.0}, 0.0, Tool::suction},
    };
    const auto dir = std::filesystem::temp_directory_path() / "i2a_test_action";
    std::filesystem::remove_all(dir);
    const auto info = robot_execution(acts, w, FailureSink{dir, "T01", 7});
    EXPECT_FALSE(info.success);
    EXPECT_EQ(info.actions_executed, 2);
    ASSERT_TRUE(info.error);
    EXPECT_EQ(info.error->kind, "EmptyGrasp");
    ASSERT_TRUE(info.failure_image_path);
    EXPECT_EQ(info.failure_image_path->filename(), "fail_T01_7_2.png");
    EXPECT_TRUE(std::filesystem::exists(*info.failure_image_path));
    EXPECT_EQ(read_png(*info.failure_image_path), sim::render_observation(w));
    EXPECT_EQ(w.step_count, 2);
    EXPECT_NEAR(w.objects[0].pose.x, 0.4, 1e-12);
    std::filesystem::remove_all(dir);
}

TEST(Execution, AllPicksSucceed)
{
    auto task = sim::generate_task(sim::MetaTask::T01_visual_manipulation, sim::Level::L1, 3);
    auto w = task.initial_world;
    const auto& d = w.get(*task.goal.dragged_id);
    const auto& base = w.get(task.goal.base_ids[0]);
    const auto info = robot_execution(std::vector<RobotAction>{{d.pose.position(), base.pose.position(), 0.0, Tool::suction}}, w);
    EXPECT_TRUE(info.success);
    EXPECT_EQ(info.actions_executed, 1);
    EXPECT_FALSE(info.failure_image_path);
    EXPECT_TRUE(sim::check_success(task, w));
}

// Ground-truth masks in, goal reached out: distractor staging followed by
// rearrangement solves every generated rearrange task.
TEST(Integration, GroundTruthRearrangeSolvesTasks)
{
    for (auto mt : {sim::MetaTask::T04_rearrange, sim::MetaTask::T05_rearrange_restore})
        for (auto level : sim::kAllLevels)
            for (std::uint64_t seed = 0; seed < 15; ++seed) {
                const auto task = sim::generate_task(mt, level, seed);
                auto w = task.initial_world;
                std::vector<int> obs_ids, goal_ids, matched;
                for (const auto& o : w.objects)
                    obs_ids.push_back(o.id);
                for (const auto& g : task.goal.target_poses) {
                    goal_ids.push_back(g.id);
                    matched.push_back(int(w.index_of(g.id)));
                }
                sim::WorldState goal_world;
                goal_world.objects = task.instruction.assets[0].scene_objects;
                const MaskSet obs = object_masks(w, obs_ids);
                const MaskSet goal = object_masks(goal_world, goal_ids);
                std::vector<int> rows(goal_ids.size());
                std::iota(rows.begin(), rows.end(), 0);

                auto acts = distractor_actions(obs, matched, goal.masks, default_camera(), w.bounds);
                const auto moves = rearrange_actions(obs, goal, matched, rows, w.bounds);
                acts.insert(acts.end(), moves.begin(), moves.end());
                ASSERT_TRUE(robot_execution(acts, w).success) << "seed " << seed;
                if (task.goal.restore) {
                    const auto back = rearrange_actions(goal, obs, rows, matched, w.bounds);
                    ASSERT_TRUE(robot_execution(back, w).success) << "seed " << seed;
                }
                EXPECT_TRUE(sim::check_success(task, w))
                    << sim::to_string(mt) << " " << sim::to_string(level) << " seed " << seed;
            }
}
