"""Object taxonomy and the scene-graph ground-truth model.

Everything here is immutable after construction and safe to share between
threads without synchronization.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class ObjectClass(str, Enum):
    DONUT = "donut"
    COKE_CAN = "coke-can"
    COKE_BOTTLE = "coke-bottle"
    BEER = "beer"
    APPLE = "apple"
    BANANA = "banana"
    LEMON = "lemon"
    ORANGE = "orange"
    PEAR = "pear"
    EGG = "egg"
    MEAT = "meat"
    MILK = "milk"
    TOMATO = "tomato"
    FISH = "fish"


class Category(str, Enum):
    DESSERT = "dessert"
    DRINK = "drink"
    FRUIT = "fruit"
    VEGETABLE = "vegetable"
    INGREDIENT = "ingredient"


class Freshness(str, Enum):
    FRESH = "fresh"
    EXPIRED = "expired"


class Size(str, Enum):
    SMALL = "small"
    LARGE = "large"


_CATEGORY_OF = {
    ObjectClass.DONUT: Category.DESSERT,
    ObjectClass.COKE_CAN: Category.DRINK,
    ObjectClass.COKE_BOTTLE: Category.DRINK,
    ObjectClass.BEER: Category.DRINK,
    ObjectClass.APPLE: Category.FRUIT,
    ObjectClass.BANANA: Category.FRUIT,
    ObjectClass.LEMON: Category.FRUIT,
    ObjectClass.ORANGE: Category.FRUIT,
    ObjectClass.PEAR: Category.FRUIT,
    ObjectClass.TOMATO: Category.VEGETABLE,
    ObjectClass.EGG: Category.INGREDIENT,
    ObjectClass.MEAT: Category.INGREDIENT,
    ObjectClass.MILK: Category.INGREDIENT,
    ObjectClass.FISH: Category.INGREDIENT,
}

# Only these classes may carry Freshness.EXPIRED; everything else is
# permanently fresh, so "fresh" filters match non-perishables too.
PERISHABLE_CLASSES = frozenset({ObjectClass.APPLE, ObjectClass.BANANA, ObjectClass.MEAT})

RELATION_DIRECTIONS = ("left-of", "right-of", "in-front-of", "behind")


def category_of(obj_class: ObjectClass) -> Category:
    """Fixed total mapping from the 14 object classes onto the 5 categories."""
    return _CATEGORY_OF[obj_class]


def is_perishable(obj_class: ObjectClass) -> bool:
    return obj_class in PERISHABLE_CLASSES


@dataclass(frozen=True)
class SceneObject:
    """One item on the shelf with its ground-truth properties.

    ``position`` is the (x, y) shelf-plane center in [0, 1]^2, smaller y
    meaning nearer the fridge door. ``bbox`` is (x_min, y_min, x_max, y_max)
    in normalized image coordinates.
    """

    id: int
    obj_class: ObjectClass
    size: Size
    freshness: Freshness
    position: tuple[float, float]
    footprint_radius: float
    bbox: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        if self.freshness is Freshness.EXPIRED and not is_perishable(self.obj_class):
            raise ValueError(f"{self.obj_class.value} cannot be expired")
        x, y = self.position
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            raise ValueError(f"position {self.position} outside the unit shelf")
        x0, y0, x1, y1 = self.bbox
        if not (x0 < x1 and y0 < y1):
            raise ValueError(f"degenerate bbox {self.bbox}")
        if not (0.0 <= x0 and x1 <= 1.0 and 0.0 <= y0 and y1 <= 1.0):
            raise ValueError(f"bbox {self.bbox} outside [0, 1]")
        if self.footprint_radius <= 0.0:
            raise ValueError("footprint_radius must be positive")


@dataclass(frozen=True)
class Scene:
    """Ground truth for one fridge snapshot.

    ``relationships`` maps each direction in RELATION_DIRECTIONS to
    {object id -> tuple of related object ids}; left-of/right-of and
    in-front-of/behind are mutual converses.
    """

    scene_id: int
    seed: int
    objects: tuple[SceneObject, ...]
    relationships: dict[str, dict[int, tuple[int, ...]]]

    def __post_init__(self) -> None:
        ids = [obj.id for obj in self.objects]
        if ids != list(range(len(self.objects))):
            raise ValueError("object ids must be 0..n-1 in order")
        if set(self.relationships) != set(RELATION_DIRECTIONS):
            raise ValueError("relationships must cover exactly the four directions")

    def __len__(self) -> int:
        return len(self.objects)
