// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "i2a/core/codec.hpp"
#include "i2a/core/error.hpp"
#include "i2a/core/geometry.hpp"
#include "i2a/core/image.hpp"
#include "i2a/core/robot_action.hpp"
#include "i2a/perception/pipeline.hpp"
#include "i2a/sim/render.hpp"
#include "i2a/sim/world.hpp"

namespace i2a::action {

using perception::MaskSet;

/// Mask centroid rounded half-up to the nearest pixel.
inline PixelPoint pixel_to_loc(const BinaryMask& mask)
{
    const auto c = mask.centroid();
    if (!c)
        throw EmptyMask("cannot locate an empty mask");
    return {int(std::floor(c->first + 0.5)), int(std::floor(c->second + 0.5))};
}

/// Camera transform followed by per-axis clamping into the workspace.
inline Vec2 to_robot(Vec2 pixel, const CameraTransform& cam, const WorkspaceBounds& bounds)
{
    return bounds.clamp(cam.apply(pixel));
}

inline Vec2 to_robot(PixelPoint p, const CameraTransform& cam, const WorkspaceBounds& bounds)
{
    return to_robot(Vec2{double(p.x), double(p.y)}, cam, bounds);
}

inline RobotAction pick_place(PixelPoint pick, PixelPoint place, const WorkspaceBounds& bounds,
                              const CameraTransform& cam = default_camera(),
                              std::optional<double> yaw_angle_degree = std::nullopt, Tool tool = Tool::suction)
{
    RobotAction a;
    a.pick = to_robot(pick, cam, bounds);
    a.place = to_robot(place, cam, bounds);
    a.yaw_degrees = wrap_degrees_180(yaw_angle_degree.value_or(0.0));
    a.tool = tool;
    return a;
}

namespace detail {

inline std::vector<Vec2> metric_pixels(const BinaryMask& m, const CameraTransform& cam)
{
    std::vector<Vec2> out;
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x)
            if (m.at(x, y))
                out.push_back(cam.apply({double(x), double(y)}));
    return out;
}

inline bool overlaps(const BinaryMask& a, const BinaryMask& b) { return perception::intersection_count(a, b) > 0; }

} // namespace detail

struct StagingOptions {
    double clearance_m = 0.03;
    int grid = 4;
    /// Move every unmatched object, not only the ones in the way.
    bool remove_all_unmatched = false;
};

/// Border cells of a grid x grid partition of the workspace, in row-major order.
inline std::vector<Vec2> staging_cells(const WorkspaceBounds& b, int grid = 4)
{
    std::vector<Vec2> cells;
    const double dx = (b.x_max - b.x_min) / grid, dy = (b.y_max - b.y_min) / grid;
    for (int j = 0; j < grid; ++j)
        for (int i = 0; i < grid; ++i)
            if (i == 0 || j == 0 || i == grid - 1 || j == grid - 1)
                cells.push_back({b.x_min + (i + 0.5) * dx, b.y_min + (j + 0.5) * dy});
    return cells;
}

/// Moves unmatched observed objects that overlap a matched goal mask to the
/// nearest free staging cell.
inline std::vector<RobotAction> distractor_actions(const MaskSet& obs_masks, const std::vector<int>& matched_obs,
                                                   const std::vector<BinaryMask>& goal_masks,
                                                   const CameraTransform& cam, const WorkspaceBounds& bounds,
                                                   const StagingOptions& opt = {}, Tool tool = Tool::suction)
{
    for (int i : matched_obs)
        if (i < 0 || std::size_t(i) >= obs_masks.size())
            throw IndexMismatch("matched index out of range");

    std::vector<std::size_t> movers;
    for (std::size_t j = 0; j < obs_masks.size(); ++j) {
        if (std::find(matched_obs.begin(), matched_obs.end(), int(j)) != matched_obs.end())
            continue;
        const bool conflict = std::any_of(goal_masks.begin(), goal_masks.end(),
                                          [&](const BinaryMask& g) { return detail::overlaps(obs_masks.masks[j], g); });
        if (conflict || opt.remove_all_unmatched)
            movers.push_back(j);
    }
    if (movers.empty())
        return {};

    struct Obstacle {
        std::vector<Vec2> pixels;
    };
    std::vector<Obstacle> obstacles;
    for (const auto& g : goal_masks)
        obstacles.push_back({detail::metric_pixels(g, cam)});
    std::vector<std::vector<Vec2>> obs_pixels;
    for (const auto& m : obs_masks.masks)
        obs_pixels.push_back(detail::metric_pixels(m, cam));

    auto cells = staging_cells(bounds, opt.grid);
    std::vector<char> used(cells.size(), 0);
    std::vector<std::pair<Vec2, double>> placed; // staged centers with radius

    std::vector<RobotAction> actions;
    for (std::size_t j : movers) {
        const PixelPoint loc = pixel_to_loc(obs_masks.masks[j]);
        const Vec2 center = cam.apply({double(loc.x), double(loc.y)});
        double radius = 0;
        for (const auto& p : obs_pixels[j])
            radius = std::max(radius, (p - center).norm());

        auto is_free = [&](Vec2 cell) {
            const double need = radius + opt.clearance_m;
            for (std::size_t k = 0; k < obs_pixels.size(); ++k) {
                if (k == j)
                    continue;
                for (const auto& p : obs_pixels[k])
                    if ((p - cell).norm() < need)
                        return false;
            }
            for (const auto& o : obstacles)
                for (const auto& p : o.pixels)
                    if ((p - cell).norm() < need)
                        return false;
            for (const auto& [c, r] : placed)
                if ((c - cell).norm() < radius + r + opt.clearance_m)
                    return false;
            return true;
        };

        std::optional<std::size_t> best;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (used[c])
                continue;
            const double d = (cells[c] - center).norm();
            if (d < best_d && is_free(cells[c])) {
                best = c;
                best_d = d;
            }
        }
        if (!best)
            throw NoFreeSpace("no free staging cell for distractor");
        used[*best] = 1;
        placed.emplace_back(cells[*best], radius);
        // A staged object no longer occupies its old spot.
        obs_pixels[j].clear();

        RobotAction a;
        a.pick = bounds.clamp(center);
        a.place = bounds.clamp(cells[*best]);
        a.tool = tool;
        actions.push_back(a);
    }
    return actions;
}

/// Moves pick_masks[pick_ind[k]] onto place_masks[place_ind[k]], longest moves first.
inline std::vector<RobotAction> rearrange_actions(const MaskSet& pick_masks, const MaskSet& place_masks,
                                                  const std::vector<int>& pick_ind, const std::vector<int>& place_ind,
                                                  const WorkspaceBounds& bounds,
                                                  const CameraTransform& cam = default_camera(),
                                                  Tool tool = Tool::suction)
{
    if (pick_ind.size() != place_ind.size())
        throw IndexMismatch("pick and place index lists differ in length");
    std::vector<RobotAction> actions;
    for (std::size_t k = 0; k < pick_ind.size(); ++k) {
        const int a = pick_ind[k], b = place_ind[k];
        if (a < 0 || std::size_t(a) >= pick_masks.size() || b < 0 || std::size_t(b) >= place_masks.size())
            throw IndexMismatch("mask index out of range");
        actions.push_back(pick_place(pixel_to_loc(pick_masks.masks[std::size_t(a)]),
                                     pixel_to_loc(place_masks.masks[std::size_t(b)]), bounds, cam, std::nullopt, tool));
    }
    std::stable_sort(actions.begin(), actions.end(), [](const RobotAction& x, const RobotAction& y) {
        return (x.place - x.pick).norm() > (y.place - y.pick).norm();
    });
    return actions;
}

struct ExecutionError {
    std::string kind;
    std::string message;

    friend bool operator==(const ExecutionError&, const ExecutionError&) = default;
};

struct ExecutionInfo {
    bool success = true;
    int actions_executed = 0;
    std::optional<std::filesystem::path> failure_image_path;
    double elapsed_ms = 0.0;
    std::optional<ExecutionError> error;
};

/// Where failure snapshots go; no directory means snapshots are skipped.
struct FailureSink {
    std::optional<std::filesystem::path> directory;
    std::string task = "task";
    std::uint64_t seed = 0;

    std::optional<std::filesystem::path> save(const sim::WorldState& world, int step) const
    {
        if (!directory)
            return std::nullopt;
        std::filesystem::create_directories(*directory);
        const auto path =
            *directory / ("fail_" + task + "_" + std::to_string(seed) + "_" + std::to_string(step) + ".png");
        write_png(path, sim::render_observation(world));
        return path;
    }
};

/// Runs actions in order; stops at the first action that grasps nothing.
inline ExecutionInfo robot_execution(const std::vector<RobotAction>& actions, sim::WorldState& world,
                                     const FailureSink& sink = {})
{
    const auto start = std::chrono::steady_clock::now();
    ExecutionInfo info;
    for (const auto& a : actions) {
        const bool picked = sim::apply_action(world, a);
        ++info.actions_executed;
        if (!picked) {
            info.success = false;
            info.error = ExecutionError{"EmptyGrasp", "nothing to pick at step " + std::to_string(world.step_count)};
            info.failure_image_path = sink.save(world, world.step_count);
            break;
        }
    }
    info.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return info;
}

} // namespace i2a::action
