// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "i2a/sim/task.hpp"
#include "i2a/sim/world.hpp"

namespace i2a::sim {

struct Tolerance {
    double position_m = 0.03;
    double yaw_deg = 15.0;
    double rotation_drift_m = 0.02;
};

namespace detail {

inline bool pose_close(const Pose& a, const Pose& b, const Tolerance& tol)
{
    const double d = std::hypot(a.x - b.x, a.y - b.y);
    return d <= tol.position_m && std::fabs(wrap_degrees_180(a.yaw - b.yaw)) <= tol.yaw_deg;
}

inline bool inside(const WorldState& w, const std::vector<Pose>& poses, int dragged, int base)
{
    const auto di = w.index_of(dragged), bi = w.index_of(base);
    return point_in_polygon(world_footprint(w.objects[bi].shape, poses[bi]), poses[di].position());
}

inline bool targets_at_goal(const WorldState& w, const std::vector<Pose>& poses, const GoalSpec& g,
                            const Tolerance& tol)
{
    for (const auto& t : g.target_poses)
        if (!pose_close(poses[w.index_of(t.id)], t.pose, tol))
            return false;
    return true;
}

} // namespace detail

/// Container ids the dragged object landed in, in step order (consecutive repeats collapsed).
inline std::vector<int> container_visits(const WorldState& world, int dragged_id)
{
    std::vector<int> visits;
    for (const auto& h : world.history) {
        if (!h.picked_id || *h.picked_id != dragged_id)
            continue;
        for (const auto& o : world.objects) {
            if (!is_container(o.shape) || o.id == dragged_id)
                continue;
            if (detail::inside(world, h.poses, dragged_id, o.id)) {
                if (visits.empty() || visits.back() != o.id)
                    visits.push_back(o.id);
                break;
            }
        }
    }
    return visits;
}

/// Scores the terminal state of an episode that started from task.initial_world.
inline bool check_success(const TaskInstance& task, const WorldState& world, const Tolerance& tol = {})
{
    const GoalSpec& g = task.goal;
    const auto& initial = task.initial_world;
    const auto final_poses = world.poses();

    switch (task.meta_task) {
    case MetaTask::T01_visual_manipulation:
    case MetaTask::T02_scene_understanding:
        return detail::inside(world, final_poses, *g.dragged_id, g.base_ids.at(0));

    case MetaTask::T03_rotation: {
        const Pose& a = initial.get(*g.dragged_id).pose;
        const Pose& b = world.get(*g.dragged_id).pose;
        const double err = wrap_degrees_180(b.yaw - a.yaw - *g.target_yaw_delta);
        return std::fabs(err) <= tol.yaw_deg && std::hypot(b.x - a.x, b.y - a.y) < tol.rotation_drift_m;
    }

    case MetaTask::T04_rearrange:
        return detail::targets_at_goal(world, final_poses, g, tol);

    case MetaTask::T05_rearrange_restore: {
        bool reached = false;
        for (const auto& h : world.history)
            reached = reached || detail::targets_at_goal(world, h.poses, g, tol);
        if (!reached)
            return false;
        for (const auto& t : g.target_poses)
            if (!detail::pose_close(world.get(t.id).pose, initial.get(t.id).pose, tol))
                return false;
        return true;
    }

    case MetaTask::T17_pick_order_restore: {
        std::vector<int> order;
        for (int id : container_visits(world, *g.dragged_id))
            if (std::find(g.base_ids.begin(), g.base_ids.end(), id) != g.base_ids.end())
                order.push_back(id);
        return order == g.base_ids &&
               detail::pose_close(world.get(*g.dragged_id).pose, initial.get(*g.dragged_id).pose, tol);
    }
    }
    return false;
}

} // namespace i2a::sim
