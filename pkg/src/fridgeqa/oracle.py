"""Canonical query programs and their exact evaluation over scenes.

This is the single source of truth for answers: the dataset generator, the
parser round-trip tests, and the serving path all call :func:`evaluate`.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .model import Category, Freshness, ObjectClass, Scene, SceneObject, Size, category_of


class Head(str, Enum):
    EXIST = "exist"
    COUNT = "count"


@dataclass(frozen=True)
class FilterSet:
    """Conjunction of optional property filters.

    A category filter paired with a class from a different category is
    representable but matches nothing (the conjunction can never hold);
    the parser rejects such questions and the generator never emits them.
    """

    size: Size | None = None
    freshness: Freshness | None = None
    category: Category | None = None
    obj_class: ObjectClass | None = None

    @property
    def is_consistent(self) -> bool:
        if self.category is None or self.obj_class is None:
            return True
        return category_of(self.obj_class) is self.category

    def present(self) -> tuple[str, ...]:
        """Names of the filters that are set, in canonical order."""
        names = []
        if self.category is not None:
            names.append("category")
        if self.obj_class is not None:
            names.append("class")
        if self.freshness is not None:
            names.append("freshness")
        if self.size is not None:
            names.append("size")
        return tuple(names)


@dataclass(frozen=True)
class QueryProgram:
    filters: FilterSet
    head: Head


@dataclass(frozen=True)
class YesNo:
    value: bool


@dataclass(frozen=True)
class Number:
    value: int


Answer = YesNo | Number


def matches(obj: SceneObject, filters: FilterSet) -> bool:
    """Every set filter must hold; the empty filter set matches everything."""
    if filters.size is not None and obj.size is not filters.size:
        return False
    if filters.freshness is not None and obj.freshness is not filters.freshness:
        return False
    if filters.category is not None and category_of(obj.obj_class) is not filters.category:
        return False
    if filters.obj_class is not None and obj.obj_class is not filters.obj_class:
        return False
    return True


def evaluate(program: QueryProgram, scene: Scene) -> Answer:
    count = 0
    for obj in scene.objects:
        if matches(obj, program.filters):
            count += 1
    if program.head is Head.COUNT:
        return Number(count)
    return YesNo(count > 0)


def answer_text(answer: Answer) -> str:
    if isinstance(answer, YesNo):
        return "yes" if answer.value else "no"
    return str(answer.value)


# Canonical textual program form: the head token followed by the set
# filters as "key=value" tokens in alphabetical key order, e.g.
# "count class=banana size=large".

_FILTER_KEYS = ("category", "class", "freshness", "size")


def program_to_text(program: QueryProgram) -> str:
    f = program.filters
    values = {
        "category": f.category,
        "class": f.obj_class,
        "freshness": f.freshness,
        "size": f.size,
    }
    parts = [program.head.value]
    for key in _FILTER_KEYS:
        if values[key] is not None:
            parts.append(f"{key}={values[key].value}")
    return " ".join(parts)


def program_from_text(text: str) -> QueryProgram:
    tokens = text.split()
    if not tokens:
        raise ValueError("empty program text")
    head = Head(tokens[0])
    kwargs: dict[str, object] = {}
    for token in tokens[1:]:
        key, _, value = token.partition("=")
        if key == "size":
            kwargs["size"] = Size(value)
        elif key == "freshness":
            kwargs["freshness"] = Freshness(value)
        elif key == "category":
            kwargs["category"] = Category(value)
        elif key == "class":
            kwargs["obj_class"] = ObjectClass(value)
        else:
            raise ValueError(f"unknown filter key {key!r} in {text!r}")
    return QueryProgram(filters=FilterSet(**kwargs), head=head)


def enumerate_programs() -> list[QueryProgram]:
    """The full finite program space: 3 x 3 x 6 x 15 x 2 = 1,620 programs."""
    sizes: list[Size | None] = [None, *Size]
    freshes: list[Freshness | None] = [None, *Freshness]
    categories: list[Category | None] = [None, *Category]
    classes: list[ObjectClass | None] = [None, *ObjectClass]
    programs = []
    for size in sizes:
        for freshness in freshes:
            for category in categories:
                for obj_class in classes:
                    filters = FilterSet(
                        size=size,
                        freshness=freshness,
                        category=category,
                        obj_class=obj_class,
                    )
                    for head in Head:
                        programs.append(QueryProgram(filters=filters, head=head))
    return programs
