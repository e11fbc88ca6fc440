def main_2() -> dict:
    """Execute the given instructions of rotating the {dragged_obj} 150 degrees"""
    image = GetObsImage(obs)
    masks = SAM(image=image)
    objs, masks = ImageCrop(image=image, masks=masks)
    obj_0 = CLIPRetrieval(objs=objs, query=templates.get("dragged_obj"))
    loc_0 = Pixel2Loc(obj=obj_0, masks=masks)
    action = PickPlace(pick=loc_0, place=loc_0, bounds=BOUNDS, yaw_angle_degree=150)
    info = RobotExecution(action=action)
    return info
