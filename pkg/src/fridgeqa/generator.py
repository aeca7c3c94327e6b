"""Deterministic, seeded procedural generation of shelf scenes.

All randomness flows through ``random.Random`` (the stdlib Mersenne Twister,
MT19937), which produces the same stream for the same seed on every
platform. Sub-seeds are derived with SHA-256 so they are stable regardless
of interpreter hash randomization.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field

from .model import (
    Freshness,
    ObjectClass,
    RELATION_DIRECTIONS,
    Scene,
    SceneObject,
    Size,
    is_perishable,
)


class PlacementExhausted(RuntimeError):
    """No acceptable position found within the configured attempt budget."""


# Base (width, height) of each class's bbox in normalized image units,
# before size scaling. Invented geometry; only existence and rough shape of
# the boxes matter downstream.
CLASS_GEOMETRY: dict[ObjectClass, tuple[float, float]] = {
    ObjectClass.DONUT: (0.10, 0.07),
    ObjectClass.COKE_CAN: (0.06, 0.10),
    ObjectClass.COKE_BOTTLE: (0.07, 0.16),
    ObjectClass.BEER: (0.07, 0.14),
    ObjectClass.APPLE: (0.08, 0.08),
    ObjectClass.BANANA: (0.12, 0.06),
    ObjectClass.LEMON: (0.06, 0.06),
    ObjectClass.ORANGE: (0.07, 0.07),
    ObjectClass.PEAR: (0.07, 0.09),
    ObjectClass.EGG: (0.05, 0.06),
    ObjectClass.MEAT: (0.12, 0.08),
    ObjectClass.MILK: (0.09, 0.14),
    ObjectClass.TOMATO: (0.07, 0.06),
    ObjectClass.FISH: (0.13, 0.06),
}

SIZE_SCALE = {Size.SMALL: 0.8, Size.LARGE: 1.3}

_CLASSES = list(ObjectClass)
_SCENE_RETRIES = 10


def derive_seed(master_seed: int, *parts: object) -> int:
    """Stable 64-bit sub-seed from a master seed and any hashable labels."""
    text = repr((master_seed,) + parts).encode("utf-8")
    return int.from_bytes(hashlib.sha256(text).digest()[:8], "big")


@dataclass(frozen=True)
class SceneConfig:
    min_objects: int = 3
    max_objects: int = 10
    expired_probability: float = 0.3
    large_probability: float = 0.5
    min_center_separation: float = 0.08
    max_placement_attempts: int = 50

    def __post_init__(self) -> None:
        if not (0 < self.min_objects <= self.max_objects):
            raise ValueError("need 0 < min_objects <= max_objects")
        for name in ("expired_probability", "large_probability"):
            p = getattr(self, name)
            if not (0.0 <= p <= 1.0):
                raise ValueError(f"{name} must be in [0, 1]")
        if self.min_center_separation < 0.0:
            raise ValueError("min_center_separation must be >= 0")
        if self.max_placement_attempts < 1:
            raise ValueError("max_placement_attempts must be >= 1")


DEFAULT_SCENE_CONFIG = SceneConfig()


def bbox_extents(obj_class: ObjectClass, size: Size) -> tuple[float, float]:
    """Half-width and half-height of the object's bbox."""
    w, h = CLASS_GEOMETRY[obj_class]
    scale = SIZE_SCALE[size]
    return (w * scale / 2.0, h * scale / 2.0)


def place_object(
    existing: list[SceneObject],
    rng: random.Random,
    config: SceneConfig,
    obj_class: ObjectClass,
    size: Size,
) -> tuple[tuple[float, float], tuple[float, float, float, float], float]:
    """Rejection-sample a center keeping the bbox inside [0, 1]^2.

    Centers keep at least ``min_center_separation`` from every existing
    center; bboxes may still overlap, which is deliberate (occlusion).
    Returns (position, bbox, footprint_radius).
    """
    half_w, half_h = bbox_extents(obj_class, size)
    sep = config.min_center_separation
    for _ in range(config.max_placement_attempts):
        x = rng.uniform(half_w, 1.0 - half_w)
        y = rng.uniform(half_h, 1.0 - half_h)
        if all(math.dist((x, y), other.position) >= sep for other in existing):
            bbox = (x - half_w, y - half_h, x + half_w, y + half_h)
            return ((x, y), bbox, max(half_w, half_h))
    raise PlacementExhausted(
        f"no position after {config.max_placement_attempts} attempts "
        f"({len(existing)} objects placed)"
    )


def compute_relationships(
    objects: tuple[SceneObject, ...] | list[SceneObject],
) -> dict[str, dict[int, tuple[int, ...]]]:
    """Pairwise spatial relations from shelf-plane centers.

    a left-of b  iff a.x < b.x; a in-front-of b iff a.y < b.y (smaller y is
    nearer the door). Equal coordinates relate in neither direction.
    """
    rel: dict[str, dict[int, list[int]]] = {
        d: {obj.id: [] for obj in objects} for d in RELATION_DIRECTIONS
    }
    for a in objects:
        for b in objects:
            if a.id == b.id:
                continue
            if a.position[0] < b.position[0]:
                rel["left-of"][a.id].append(b.id)
            elif a.position[0] > b.position[0]:
                rel["right-of"][a.id].append(b.id)
            if a.position[1] < b.position[1]:
                rel["in-front-of"][a.id].append(b.id)
            elif a.position[1] > b.position[1]:
                rel["behind"][a.id].append(b.id)
    return {d: {i: tuple(v) for i, v in by_id.items()} for d, by_id in rel.items()}


def _sample_objects(rng: random.Random, config: SceneConfig) -> tuple[SceneObject, ...]:
    count = rng.randint(config.min_objects, config.max_objects)
    objects: list[SceneObject] = []
    for obj_id in range(count):
        obj_class = rng.choice(_CLASSES)
        size = Size.LARGE if rng.random() < config.large_probability else Size.SMALL
        freshness = Freshness.FRESH
        if is_perishable(obj_class) and rng.random() < config.expired_probability:
            freshness = Freshness.EXPIRED
        position, bbox, radius = place_object(objects, rng, config, obj_class, size)
        objects.append(
            SceneObject(
                id=obj_id,
                obj_class=obj_class,
                size=size,
                freshness=freshness,
                position=position,
                footprint_radius=radius,
                bbox=bbox,
            )
        )
    return tuple(objects)


def generate_scene(
    seed: int,
    config: SceneConfig = DEFAULT_SCENE_CONFIG,
    scene_id: int = 0,
) -> Scene:
    """Pure function of (seed, config): same inputs give a bit-identical scene.

    If placement gets stuck the whole scene is retried with a derived
    sub-seed, up to 10 retries, before giving up.
    """
    last_error: PlacementExhausted | None = None
    for attempt in range(_SCENE_RETRIES):
        attempt_seed = seed if attempt == 0 else derive_seed(seed, "retry", attempt)
        rng = random.Random(attempt_seed)
        try:
            objects = _sample_objects(rng, config)
        except PlacementExhausted as err:
            last_error = err
            continue
        return Scene(
            scene_id=scene_id,
            seed=seed,
            objects=objects,
            relationships=compute_relationships(objects),
        )
    raise PlacementExhausted(
        f"scene for seed {seed} failed {_SCENE_RETRIES} retries: {last_error}"
    )


def build_scene(scene_id: int, seed: int, objects: list[SceneObject]) -> Scene:
    """Assemble a hand-authored scene, deriving its relationship maps."""
    return Scene(
        scene_id=scene_id,
        seed=seed,
        objects=tuple(objects),
        relationships=compute_relationships(objects),
    )
