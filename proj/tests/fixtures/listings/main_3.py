def main_3() -> dict:
    """Execute the given instructions of rearranging the objects to match the objects in the given scene"""
    image_obs = GetObsImage(obs)
    image_goal = templates.get("scene")
    masks_obs = SAM(image=image_obs)
    objs_obs, masks_obs = ImageCrop(image=image_obs, masks=masks_obs)
    masks_goal = SAM(image=image_goal)
    objs_goal, masks_goal = ImageCrop(image=image_goal, masks=masks_goal)
    row, col = get_objs_match(objs_list1=objs_goal, objs_list2=objs_obs)
    action_1 = DistractorActions(mask_obs=masks_obs, obj_list=col)
    action_2 = RearrangeActions(pick_masks=masks_obs, place_masks=masks_goal, pick_ind=col, place_ind=row, bounds=BOUNDS)
    action_3 = RearrangeActions(pick_masks=masks_goal, place_masks=masks_obs, pick_ind=row, place_ind=col, bounds=BOUNDS)
    actions = []
    actions.extend(action_1).extend(action_2).extend(action_3)
    info = RobotExecution(action=actions)
    return info
