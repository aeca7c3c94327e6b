"""Shared scene-building helpers for the test suite."""

from fridgeqa.generator import bbox_extents, build_scene
from fridgeqa.model import Freshness, ObjectClass, Scene, SceneObject, Size


def make_object(
    obj_id: int,
    obj_class: ObjectClass,
    size: Size = Size.SMALL,
    freshness: Freshness = Freshness.FRESH,
    x: float = 0.5,
    y: float = 0.5,
) -> SceneObject:
    half_w, half_h = bbox_extents(obj_class, size)
    x = min(max(x, half_w), 1.0 - half_w)
    y = min(max(y, half_h), 1.0 - half_h)
    return SceneObject(
        id=obj_id,
        obj_class=obj_class,
        size=size,
        freshness=freshness,
        position=(x, y),
        footprint_radius=max(half_w, half_h),
        bbox=(x - half_w, y - half_h, x + half_w, y + half_h),
    )


def fig_5b_scene() -> Scene:
    """Three pieces of meat, two of them expired, plus one expired banana."""
    return build_scene(
        scene_id=0,
        seed=0,
        objects=[
            make_object(0, ObjectClass.MEAT, Size.LARGE, Freshness.EXPIRED, 0.2, 0.3),
            make_object(1, ObjectClass.MEAT, Size.SMALL, Freshness.EXPIRED, 0.5, 0.6),
            make_object(2, ObjectClass.MEAT, Size.SMALL, Freshness.FRESH, 0.8, 0.4),
            make_object(3, ObjectClass.BANANA, Size.LARGE, Freshness.EXPIRED, 0.35, 0.75),
        ],
    )
