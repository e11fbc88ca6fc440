// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "i2a/sim/task.hpp"

namespace i2a::sim {

using nlohmann::json;

inline json to_json(const TextureSpec& t)
{
    json j{{"kind", to_string(t.kind)}, {"primary", to_string(t.primary)}};
    if (t.secondary)
        j["secondary"] = to_string(*t.secondary);
    return j;
}

inline TextureSpec texture_spec_from_json(const json& j)
{
    TextureSpec t;
    t.kind = texture_from_string(j.at("kind").get<std::string>());
    t.primary = color_from_string(j.at("primary").get<std::string>());
    if (j.contains("secondary"))
        t.secondary = color_from_string(j.at("secondary").get<std::string>());
    if (!t.valid())
        throw Error("invalid texture spec");
    return t;
}

inline json to_json(const Pose& p) { return {{"x", p.x}, {"y", p.y}, {"yaw", p.yaw}}; }

inline Pose pose_from_json(const json& j)
{
    return {j.at("x").get<double>(), j.at("y").get<double>(), j.at("yaw").get<double>()};
}

inline json to_json(const WorldObject& o)
{
    return {{"id", o.id},           {"shape", to_string(o.shape)}, {"texture", to_json(o.texture)},
            {"pose", to_json(o.pose)}, {"movable", o.movable},      {"layer", o.layer}};
}

inline WorldObject object_from_json(const json& j)
{
    WorldObject o;
    o.id = j.at("id").get<int>();
    o.shape = shape_from_string(j.at("shape").get<std::string>());
    o.texture = texture_spec_from_json(j.at("texture"));
    o.pose = pose_from_json(j.at("pose"));
    o.movable = j.value("movable", true);
    o.layer = j.value("layer", 0);
    return o;
}

inline json to_json(const GoalSpec& g)
{
    json j = json::object();
    if (g.dragged_id)
        j["dragged_id"] = *g.dragged_id;
    j["base_ids"] = g.base_ids;
    if (g.target_yaw_delta)
        j["target_yaw_delta"] = *g.target_yaw_delta;
    json targets = json::array();
    for (const auto& t : g.target_poses)
        targets.push_back({{"id", t.id}, {"pose", to_json(t.pose)}});
    j["target_poses"] = targets;
    j["restore"] = g.restore;
    return j;
}

inline GoalSpec goal_from_json(const json& j)
{
    GoalSpec g;
    if (j.contains("dragged_id"))
        g.dragged_id = j.at("dragged_id").get<int>();
    g.base_ids = j.value("base_ids", std::vector<int>{});
    if (j.contains("target_yaw_delta"))
        g.target_yaw_delta = j.at("target_yaw_delta").get<double>();
    for (const auto& t : j.value("target_poses", json::array()))
        g.target_poses.push_back({t.at("id").get<int>(), pose_from_json(t.at("pose"))});
    g.restore = j.value("restore", false);
    return g;
}

inline json to_json(const TaskInstruction& ins)
{
    json assets = json::array();
    for (const auto& a : ins.assets) {
        json aj{{"key", a.key}, {"kind", a.kind == AssetKind::scene ? "scene" : "object_crop"}};
        if (a.kind == AssetKind::object_crop) {
            aj["object_id"] = a.object_id;
        } else {
            json objs = json::array();
            for (const auto& o : a.scene_objects)
                objs.push_back(to_json(o));
            aj["objects"] = objs;
        }
        assets.push_back(aj);
    }
    return {{"pure_text", ins.pure_text},
            {"multimodal_text", ins.multimodal_text},
            {"assets", assets},
            {"pointing_ids", ins.pointing_ids}};
}

inline TaskInstruction instruction_from_json(const json& j)
{
    TaskInstruction ins;
    ins.pure_text = j.at("pure_text").get<std::string>();
    ins.multimodal_text = j.at("multimodal_text").get<std::string>();
    for (const auto& aj : j.at("assets")) {
        AssetSpec a;
        a.key = aj.at("key").get<std::string>();
        a.kind = aj.at("kind").get<std::string>() == "scene" ? AssetKind::scene : AssetKind::object_crop;
        a.object_id = aj.value("object_id", -1);
        for (const auto& o : aj.value("objects", json::array()))
            a.scene_objects.push_back(object_from_json(o));
        ins.assets.push_back(std::move(a));
    }
    ins.pointing_ids = j.value("pointing_ids", std::vector<int>{});
    return ins;
}

/// Schema: meta_task, level, seed, objects[], goal (+ instruction).
inline json to_json(const TaskInstance& t)
{
    json objs = json::array();
    for (const auto& o : t.initial_world.objects)
        objs.push_back(to_json(o));
    return {{"meta_task", to_string(t.meta_task)},
            {"level", to_string(t.level)},
            {"seed", t.seed},
            {"objects", objs},
            {"goal", to_json(t.goal)},
            {"instruction", to_json(t.instruction)}};
}

inline TaskInstance task_from_json(const json& j)
{
    TaskInstance t;
    t.meta_task = meta_task_from_string(j.at("meta_task").get<std::string>());
    t.level = level_from_string(j.at("level").get<std::string>());
    t.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& o : j.at("objects"))
        t.initial_world.objects.push_back(object_from_json(o));
    t.goal = goal_from_json(j.at("goal"));
    if (j.contains("instruction"))
        t.instruction = instruction_from_json(j.at("instruction"));
    auto known = [&](int id) { return t.initial_world.find(id) != nullptr; };
    bool ok = !t.goal.dragged_id || known(*t.goal.dragged_id);
    for (int id : t.goal.base_ids)
        ok = ok && known(id);
    for (const auto& g : t.goal.target_poses)
        ok = ok && known(g.id);
    if (!ok)
        throw Error("goal references an object id absent from the scene");
    return t;
}

} // namespace i2a::sim
