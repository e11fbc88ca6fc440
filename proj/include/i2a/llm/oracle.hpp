// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "i2a/core/modality.hpp"
#include "i2a/sim/task.hpp"

namespace i2a::llm {

namespace detail {

inline std::string quote(const std::string& s)
{
    std::string out = "'";
    for (char c : s) {
        if (c == '\\' || c == '\'')
            out += '\\';
        out += c;
    }
    return out + "'";
}

/// Query expression for an object: its cache key when visual, else its description.
inline std::string query(const sim::TaskInstance& t, Modality m, const char* key, int id)
{
    if (m == Modality::multimodal)
        return std::string("templates.get('") + key + "')";
    return quote(sim::describe(t.initial_world.get(id)));
}

} // namespace detail

/// Ground-truth policy program for a task, shaped like the in-context example
/// of its family.
inline std::string oracle_source(const sim::TaskInstance& task, Modality modality = Modality::multimodal)
{
    const auto& g = task.goal;
    std::string s = "def main() -> dict:\n";
    auto line = [&s](const std::string& l) { s += "    " + l + "\n"; };
    switch (task.meta_task) {
    case sim::MetaTask::T01_visual_manipulation: {
        line("image = GetObsImage(obs)");
        line("masks = SAM(image=image)");
        line("objs, masks = ImageCrop(image=image, masks=masks)");
        line("obj_0 = CLIPRetrieval(objs=objs, query=" + detail::query(task, modality, "base_obj", g.base_ids.at(0)) +
             ")");
        line("loc_0 = Pixel2Loc(obj=obj_0, masks=masks)");
        line("obj_1 = CLIPRetrieval(objs=objs, query=" +
             detail::query(task, modality, "dragged_obj", *g.dragged_id) + ", pre_obj1=obj_0)");
        line("loc_1 = Pixel2Loc(obj=obj_1, masks=masks)");
        line("action = PickPlace(pick=loc_1, place=loc_0, bounds=BOUNDS)");
        line("info = RobotExecution(action=action)");
        break;
    }
    case sim::MetaTask::T02_scene_understanding: {
        const auto& w = task.initial_world;
        line("image = GetObsImage(obs)");
        line("masks_obs = SAM(image=image)");
        line("objs_obs, masks_obs = ImageCrop(image=image, masks=masks_obs)");
        line("objs_goal, masks_goal = ImageCrop(image=templates.get('scene'), masks=SAM(image=templates.get('scene')))");
        line("goal = CLIPRetrieval(objs=objs_goal, query=" + detail::quote(sim::describe_texture(w.get(*g.dragged_id))) +
             ")");
        line("target = CLIPRetrieval(objs=objs_obs, query=objs_goal[goal])");
        line("loc_0 = Pixel2Loc(obj=target, masks=masks_obs)");
        line("obj_1 = CLIPRetrieval(objs=objs_obs, query=" +
             detail::quote(sim::describe_texture(w.get(g.base_ids.at(0)))) + ", pre_obj1=target)");
        line("loc_1 = Pixel2Loc(obj=obj_1, masks=masks_obs)");
        line("action = PickPlace(pick=loc_0, place=loc_1, bounds=BOUNDS)");
        line("info = RobotExecution(action=action)");
        break;
    }
    case sim::MetaTask::T03_rotation: {
        line("image = GetObsImage(obs)");
        line("masks = SAM(image=image)");
        line("objs, masks = ImageCrop(image=image, masks=masks)");
        line("obj_0 = CLIPRetrieval(objs=objs, query=" +
             detail::query(task, modality, "dragged_obj", *g.dragged_id) + ")");
        line("loc_0 = Pixel2Loc(obj=obj_0, masks=masks)");
        line("action = PickPlace(pick=loc_0, place=loc_0, bounds=BOUNDS, yaw_angle_degree=" +
             std::to_string(int(*g.target_yaw_delta)) + ")");
        line("info = RobotExecution(action=action)");
        break;
    }
    case sim::MetaTask::T04_rearrange:
    case sim::MetaTask::T05_rearrange_restore: {
        line("image_obs = GetObsImage(obs)");
        line("image_goal = templates.get('scene')");
        line("masks_obs = SAM(image=image_obs)");
        line("objs_obs, masks_obs = ImageCrop(image=image_obs, masks=masks_obs)");
        line("masks_goal = SAM(image=image_goal)");
        line("objs_goal, masks_goal = ImageCrop(image=image_goal, masks=masks_goal)");
        line("row, col = get_objs_match(objs_list1=objs_goal, objs_list2=objs_obs)");
        line("action_1 = DistractorActions(mask_obs=masks_obs, obj_list=col)");
        line("action_2 = RearrangeActions(pick_masks=masks_obs, place_masks=masks_goal, pick_ind=col, "
             "place_ind=row, bounds=BOUNDS)");
        if (g.restore) {
            line("action_3 = RearrangeActions(pick_masks=masks_goal, place_masks=masks_obs, pick_ind=row, "
                 "place_ind=col, bounds=BOUNDS)");
        }
        line("actions = []");
        line(g.restore ? "actions.extend(action_1).extend(action_2).extend(action_3)"
                       : "actions.extend(action_1).extend(action_2)");
        line("info = RobotExecution(action=actions)");
        break;
    }
    case sim::MetaTask::T17_pick_order_restore: {
        line("image = GetObsImage(obs)");
        line("masks = SAM(image=image)");
        line("objs, masks = ImageCrop(image=image, masks=masks)");
        line("base_obj_1 = CLIPRetrieval(objs, " + detail::query(task, modality, "base_obj_1", g.base_ids.at(0)) +
             ")");
        line("base_obj_2 = CLIPRetrieval(objs, " + detail::query(task, modality, "base_obj_2", g.base_ids.at(1)) +
             ", pre_obj1=base_obj_1)");
        line("dragged_obj = CLIPRetrieval(objs, " + detail::query(task, modality, "dragged_obj", *g.dragged_id) +
             ", pre_obj1=base_obj_1, pre_obj2=base_obj_2)");
        line("loc_base_obj_1 = Pixel2Loc(base_obj_1, masks)");
        line("loc_base_obj_2 = Pixel2Loc(base_obj_2, masks)");
        line("loc_dragged_obj = Pixel2Loc(dragged_obj, masks)");
        line("action_1 = PickPlace(pick=loc_dragged_obj, place=loc_base_obj_1, bounds=BOUNDS)");
        line("action_2 = PickPlace(pick=loc_base_obj_1, place=loc_base_obj_2, bounds=BOUNDS)");
        line("action_3 = PickPlace(pick=loc_base_obj_2, place=loc_dragged_obj, bounds=BOUNDS)");
        line("actions = [action_1, action_2, action_3]");
        line("info = RobotExecution(action=actions)");
        break;
    }
    }
    line("return info");
    return s;
}

} // namespace i2a::llm
