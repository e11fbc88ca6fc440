// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "i2a/core/error.hpp"
#include "i2a/core/geometry.hpp"
#include "i2a/core/robot_action.hpp"
#include "i2a/sim/vocabulary.hpp"

namespace i2a::sim {

struct TextureSpec {
    TextureKind kind = TextureKind::solid;
    Color primary = Color::red;
    std::optional<Color> secondary;

    bool valid() const
    {
        if (kind == TextureKind::solid)
            return !secondary.has_value();
        return secondary.has_value() && *secondary != primary;
    }

    friend bool operator==(const TextureSpec&, const TextureSpec&) = default;
};

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double yaw = 0.0; ///< degrees in [0, 360)

    Vec2 position() const { return {x, y}; }

    friend bool operator==(const Pose&, const Pose&) = default;
};

struct WorldObject {
    int id = 0;
    Shape shape = Shape::block;
    TextureSpec texture;
    Pose pose;
    bool movable = true;
    /// Stacking order; higher layers are drawn and picked first.
    int layer = 0;

    friend bool operator==(const WorldObject&, const WorldObject&) = default;
};

inline Polygon world_footprint(Shape shape, const Pose& pose)
{
    Polygon out;
    const auto& local = footprint(shape);
    out.reserve(local.size());
    for (const auto& v : local)
        out.push_back(rotate(v, pose.yaw) + pose.position());
    return out;
}

inline Polygon world_footprint(const WorldObject& o) { return world_footprint(o.shape, o.pose); }

struct HistoryEntry {
    RobotAction action;
    bool picked = false;
    std::optional<int> picked_id;
    std::vector<Pose> poses; ///< post-step pose of every object, in object order

    friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

struct WorldState {
    std::vector<WorldObject> objects;
    Rgb table_color = kTableColor;
    WorkspaceBounds bounds = default_bounds();
    int step_count = 0;
    std::vector<HistoryEntry> history;

    const WorldObject* find(int id) const
    {
        for (const auto& o : objects)
            if (o.id == id)
                return &o;
        return nullptr;
    }
    WorldObject* find(int id)
    {
        for (auto& o : objects)
            if (o.id == id)
                return &o;
        return nullptr;
    }
    const WorldObject& get(int id) const
    {
        if (const auto* o = find(id))
            return *o;
        throw Error("no object with id " + std::to_string(id));
    }
    std::size_t index_of(int id) const
    {
        for (std::size_t i = 0; i < objects.size(); ++i)
            if (objects[i].id == id)
                return i;
        throw Error("no object with id " + std::to_string(id));
    }

    std::vector<Pose> poses() const
    {
        std::vector<Pose> p;
        p.reserve(objects.size());
        for (const auto& o : objects)
            p.push_back(o.pose);
        return p;
    }

    int top_layer() const
    {
        int top = 0;
        for (const auto& o : objects)
            top = std::max(top, o.layer);
        return top;
    }

    friend bool operator==(const WorldState&, const WorldState&) = default;
};

/// Topmost movable object whose footprint contains the point.
inline std::optional<std::size_t> object_at(const WorldState& world, Vec2 p)
{
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < world.objects.size(); ++i) {
        const auto& o = world.objects[i];
        if (!o.movable || !point_in_polygon(world_footprint(o), p))
            continue;
        if (!best || o.layer > world.objects[*best].layer)
            best = i;
    }
    return best;
}

struct StepResult {
    bool picked = false;
    WorldState world;
};

/// Applies one action in place. A successful pick translates the object by
/// (place - pick), keeping the grasp offset, and adds the action yaw about the
/// object's own center.
inline bool apply_action(WorldState& world, const RobotAction& action)
{
    if (!world.bounds.contains(action.pick) || !world.bounds.contains(action.place))
        throw OutOfBounds("action coordinates outside workspace bounds");

    HistoryEntry entry;
    entry.action = action;
    if (auto idx = object_at(world, action.pick)) {
        auto& o = world.objects[*idx];
        const Vec2 delta = action.place - action.pick;
        o.pose.x += delta.x;
        o.pose.y += delta.y;
        o.pose.yaw = wrap_degrees_360(o.pose.yaw + action.yaw_degrees);
        o.layer = world.top_layer() + 1;
        entry.picked = true;
        entry.picked_id = o.id;
    }
    ++world.step_count;
    entry.poses = world.poses();
    world.history.push_back(std::move(entry));
    return world.history.back().picked;
}

inline StepResult step(WorldState world, const RobotAction& action)
{
    const bool picked = apply_action(world, action);
    return {picked, std::move(world)};
}

} // namespace i2a::sim
