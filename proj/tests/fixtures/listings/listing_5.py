def main() -> dict:
    """Execute the given instructions of placing the polka dot block into the green container"""
    image = GetObsImage(obs)
    masks = SAM(image=image)
    objs, masks = ImageCrop(image=image, masks=masks)
    obj_0 = CLIPRetrieval(objs=objs, query="the polka dot block")
    loc_0 = Pixel2Loc(obj=obj_0, masks=masks)
    obj_1 = CLIPRetrieval(objs=objs, query="the green container")
    loc_1 = Pixel2Loc(obj=obj_1, masks=masks)
    action = PickPlace(pick=loc_0, place=loc_1, bounds=BOUNDS)
    info = RobotExecution(action=action)
    return info
