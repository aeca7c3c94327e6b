"""Template-driven question generation with distribution profiles.

Questions come from surface templates with maskable variable slots
({Z}=size, {M}=freshness, {C}=category, {S}=class); a DistributionProfile
controls form lengths, mask frequencies, and synonym rates. Ground-truth
answers always come from the query oracle.
"""

from __future__ import annotations

import random
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .lexicon import Lexicon, default_lexicon
from .model import (
    Category,
    Freshness,
    ObjectClass,
    Scene,
    Size,
    category_of,
    is_perishable,
)
from .oracle import Answer, FilterSet, Head, QueryProgram, evaluate

LONG = "long"
SHORT = "short"

_SLOT_RE = re.compile(r"\{([A-Z]+)\}")
_VALID_SLOTS = ("Z", "M", "C", "S", "SUBJ")
_NOMINAL_SLOTS = ("C", "S", "SUBJ")

# categories that contain at least one perishable class; freshness questions
# are only generated inside these scopes (or over generic subjects)
PERISHABLE_CATEGORIES = tuple(
    cat for cat in Category if any(category_of(c) is cat for c in ObjectClass if is_perishable(c))
)


class TemplateSyntaxError(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class DuplicateTemplateId(ValueError):
    pass


class UnsatisfiableMask(Exception):
    """The sampled mask cannot be realized with the chosen template form."""


@dataclass(frozen=True)
class TemplateForm:
    text: str
    length: str  # LONG or SHORT
    plural: bool = True

    @property
    def slots(self) -> tuple[str, ...]:
        return tuple(_SLOT_RE.findall(self.text))


@dataclass(frozen=True)
class QuestionTemplate:
    template_id: str
    head: Head
    forms: tuple[TemplateForm, ...]

    def forms_of(self, length: str) -> tuple[TemplateForm, ...]:
        return tuple(f for f in self.forms if f.length == length)

    @property
    def lengths(self) -> tuple[str, ...]:
        out = []
        for length in (LONG, SHORT):
            if any(f.length == length for f in self.forms):
                out.append(length)
        return tuple(out)


@dataclass(frozen=True)
class TemplateSet:
    templates: tuple[QuestionTemplate, ...]

    def __getitem__(self, template_id: str) -> QuestionTemplate:
        for t in self.templates:
            if t.template_id == template_id:
                return t
        raise KeyError(template_id)

    def __len__(self) -> int:
        return len(self.templates)


@dataclass(frozen=True)
class VariableMask:
    use_size: bool
    use_freshness: bool
    use_category: bool
    use_class: bool

    def pattern(self) -> str:
        return "".join(
            letter if on else "-"
            for letter, on in zip(
                "ZMCS", (self.use_size, self.use_freshness, self.use_category, self.use_class)
            )
        )

    @classmethod
    def from_pattern(cls, pattern: str) -> "VariableMask":
        if len(pattern) != 4 or any(
            ch not in (letter, "-") for ch, letter in zip(pattern, "ZMCS")
        ):
            raise ValueError(f"bad mask pattern {pattern!r}")
        return cls(*(ch != "-" for ch in pattern))


@dataclass(frozen=True)
class DistributionProfile:
    """Sampling weights defining a dataset's language distribution."""

    name: str
    form_length_weights: dict[str, float]
    mask_weights: dict[str, float]
    synonym_probability: float
    target_positive_fraction: float

    def __post_init__(self) -> None:
        for table, valid in (
            (self.form_length_weights, {LONG, SHORT}),
            (self.mask_weights, None),
        ):
            if valid is not None and not set(table) <= valid:
                raise ValueError(f"unknown keys in weights: {set(table) - valid}")
            if any(w < 0 for w in table.values()):
                raise ValueError("weights must be non-negative")
            total = sum(table.values())
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"weights must sum to 1, got {total}")
        for pattern in self.mask_weights:
            VariableMask.from_pattern(pattern)
        for p in (self.synonym_probability, self.target_positive_fraction):
            if not (0.0 <= p <= 1.0):
                raise ValueError("probabilities must be in [0, 1]")

    @property
    def short_fraction(self) -> float:
        return self.form_length_weights.get(SHORT, 0.0)


ORIGINAL_PROFILE = DistributionProfile(
    name="original",
    form_length_weights={LONG: 1.0, SHORT: 0.0},
    mask_weights={
        "----": 0.02,
        "Z---": 0.04,
        "-M--": 0.06,
        "--C-": 0.08,
        "---S": 0.10,
        "ZM--": 0.02,
        "Z-C-": 0.06,
        "Z--S": 0.10,
        "-MC-": 0.06,
        "-M-S": 0.10,
        "--CS": 0.06,
        "ZMC-": 0.04,
        "ZM-S": 0.12,
        "Z-CS": 0.04,
        "-MCS": 0.04,
        "ZMCS": 0.06,
    },
    synonym_probability=0.3,
    target_positive_fraction=0.5,
)

# After-user-test distribution: 65% short forms, masks skewed toward
# single-variable questions.
MODIFIED_PROFILE = DistributionProfile(
    name="modified",
    form_length_weights={LONG: 0.35, SHORT: 0.65},
    mask_weights={
        "----": 0.02,
        "Z---": 0.06,
        "-M--": 0.08,
        "--C-": 0.24,
        "---S": 0.38,
        "ZM--": 0.01,
        "Z-C-": 0.02,
        "Z--S": 0.06,
        "-MC-": 0.02,
        "-M-S": 0.06,
        "--CS": 0.02,
        "ZMC-": 0.00,
        "ZM-S": 0.03,
        "Z-CS": 0.00,
        "-MCS": 0.00,
        "ZMCS": 0.00,
    },
    synonym_probability=0.3,
    target_positive_fraction=0.5,
)

PROFILES = {p.name: p for p in (ORIGINAL_PROFILE, MODIFIED_PROFILE)}


def get_profile(name: str) -> DistributionProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise KeyError(f"unknown profile {name!r}; available: {sorted(PROFILES)}") from None


@dataclass(frozen=True)
class GeneratedQA:
    question_text: str
    program: QueryProgram
    answer: Answer
    template_id: str
    mask: VariableMask
    profile_name: str
    scene_id: int
    form_length: str


def load_templates(source: str) -> TemplateSet:
    """Parse the line-oriented template format (see data/templates.txt)."""
    templates: list[QuestionTemplate] = []
    seen_ids: set[str] = set()
    current_id: str | None = None
    current_head: Head | None = None
    current_forms: list[TemplateForm] = []
    current_line = 0

    def flush() -> None:
        nonlocal current_id
        if current_id is None:
            return
        if not current_forms:
            raise TemplateSyntaxError(current_line, f"template {current_id!r} has no forms")
        slot_union = {s for f in current_forms for s in f.slots}
        for slot in ("Z", "M", "C", "S"):
            if slot not in slot_union:
                raise TemplateSyntaxError(
                    current_line, f"template {current_id!r} never uses slot {{{slot}}}"
                )
        templates.append(
            QuestionTemplate(
                template_id=current_id,
                head=current_head,
                forms=tuple(current_forms),
            )
        )
        current_id = None
        current_forms.clear()

    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("template "):
            flush()
            parts = line.split()
            if len(parts) != 3:
                raise TemplateSyntaxError(lineno, "expected 'template <id> <exist|count>'")
            _, template_id, head_token = parts
            if template_id in seen_ids:
                raise DuplicateTemplateId(template_id)
            seen_ids.add(template_id)
            try:
                current_head = Head(head_token)
            except ValueError:
                raise TemplateSyntaxError(lineno, f"unknown head {head_token!r}") from None
            current_id = template_id
            current_line = lineno
        elif line.startswith("form "):
            if current_id is None:
                raise TemplateSyntaxError(lineno, "form before any template header")
            m = re.match(r'form\s+"([^"]*)"\s*(.*)$', line)
            if not m:
                raise TemplateSyntaxError(lineno, "expected 'form \"<text>\" <tags>'")
            text, tag_text = m.group(1), m.group(2)
            tags = tag_text.split()
            lengths = [t for t in tags if t in (LONG, SHORT)]
            extras = [t for t in tags if t not in (LONG, SHORT, "singular")]
            if len(lengths) != 1 or extras:
                raise TemplateSyntaxError(lineno, f"bad form tags {tags!r}")
            _validate_form_text(lineno, text)
            current_forms.append(
                TemplateForm(text=text, length=lengths[0], plural="singular" not in tags)
            )
        else:
            raise TemplateSyntaxError(lineno, f"unrecognized line {line!r}")
    flush()
    return TemplateSet(templates=tuple(templates))


def _validate_form_text(lineno: int, text: str) -> None:
    slots = _SLOT_RE.findall(text)
    for slot in slots:
        if slot not in _VALID_SLOTS:
            raise TemplateSyntaxError(lineno, f"unknown slot {{{slot}}}")
    if len(set(slots)) != len(slots):
        raise TemplateSyntaxError(lineno, "duplicate slot")
    ordered = [s for s in slots if s != "SUBJ"]
    expected = [s for s in ("Z", "M", "C", "S") if s in ordered]
    if ordered != expected:
        raise TemplateSyntaxError(lineno, "slots must appear in Z, M, C, S order")
    if not any(s in slots for s in _NOMINAL_SLOTS):
        raise TemplateSyntaxError(lineno, "form needs a {C}, {S}, or {SUBJ} nominal slot")


@lru_cache(maxsize=1)
def default_templates() -> TemplateSet:
    text = resources.files("fridgeqa.data").joinpath("templates.txt").read_text("utf-8")
    return load_templates(text)


def load_defaults() -> tuple[TemplateSet, Lexicon]:
    return default_templates(), default_lexicon()


def _weighted_choice(rng: random.Random, weights: dict[str, float]) -> str:
    roll = rng.random()
    acc = 0.0
    last = None
    for key, weight in weights.items():
        acc += weight
        last = key
        if roll < acc:
            return key
    return last  # guard against float round-off


def sample_mask(profile: DistributionProfile, rng: random.Random) -> VariableMask:
    return VariableMask.from_pattern(_weighted_choice(rng, profile.mask_weights))


def avoid_tautology(
    category: Category | None, obj_class: ObjectClass | None
) -> tuple[Category | None, ObjectClass | None]:
    """Drop a category that merely restates the class's own category."""
    if category is None or obj_class is None:
        return category, obj_class
    if category_of(obj_class) is not category:
        raise ValueError(f"cross-category pair {category.value}/{obj_class.value}")
    return None, obj_class


class SceneIndex:
    """Counts of (size, freshness, class) triples for fast answer targeting."""

    def __init__(self, scene: Scene):
        self._counts = Counter(
            (obj.size, obj.freshness, obj.obj_class) for obj in scene.objects
        )

    def count(self, filters: FilterSet) -> int:
        total = 0
        for (size, freshness, obj_class), n in self._counts.items():
            if filters.size is not None and size is not filters.size:
                continue
            if filters.freshness is not None and freshness is not filters.freshness:
                continue
            if filters.category is not None and category_of(obj_class) is not filters.category:
                continue
            if filters.obj_class is not None and obj_class is not filters.obj_class:
                continue
            total += n
        return total


def _candidate_values(
    mask: VariableMask,
) -> list[tuple[Size | None, Freshness | None, Category | None, ObjectClass | None]]:
    sizes: list[Size | None] = list(Size) if mask.use_size else [None]
    freshes: list[Freshness | None] = list(Freshness) if mask.use_freshness else [None]
    pairs: list[tuple[Category | None, ObjectClass | None]]
    if mask.use_class:
        classes = [c for c in ObjectClass if not mask.use_freshness or is_perishable(c)]
        pairs = [(category_of(c) if mask.use_category else None, c) for c in classes]
    elif mask.use_category:
        cats = list(PERISHABLE_CATEGORIES) if mask.use_freshness else list(Category)
        pairs = [(cat, None) for cat in cats]
    else:
        pairs = [(None, None)]
    return [(z, m, c, s) for z in sizes for m in freshes for (c, s) in pairs]


def _pick_form(
    template: QuestionTemplate, profile: DistributionProfile, rng: random.Random
) -> TemplateForm:
    lengths = template.lengths
    if len(lengths) == 1:
        length = lengths[0]
    else:
        length = _weighted_choice(rng, profile.form_length_weights)
    return rng.choice(template.forms_of(length))


def _surface(
    canonical: str,
    plural: bool,
    lexicon: Lexicon,
    profile: DistributionProfile,
    rng: random.Random,
) -> str:
    alternates = lexicon.alternates(canonical)
    if alternates and rng.random() < profile.synonym_probability:
        surface = rng.choice(alternates)
    else:
        surface = lexicon.display(canonical)
    return lexicon.plural_of(surface) if plural else surface


def instantiate(
    template: QuestionTemplate,
    mask: VariableMask,
    scene: Scene,
    lexicon: Lexicon,
    profile: DistributionProfile,
    rng: random.Random,
    index: SceneIndex | None = None,
) -> GeneratedQA:
    """Sample variable values, render one surface question, compute its answer.

    The value assignment is drawn to hit profile.target_positive_fraction:
    a coin picks the positive (matches at least one object) or negative
    pool; an empty pool falls back to the other. Freshness only combines
    with perishable classes or category/subject scopes containing them,
    and a category that restates the class is dropped (tautology repair).
    """
    form = _pick_form(template, profile, rng)
    slots = form.slots
    for letter, enabled in zip("ZMCS", (mask.use_size, mask.use_freshness,
                                        mask.use_category, mask.use_class)):
        if enabled and letter not in slots:
            raise UnsatisfiableMask(f"form {form.text!r} lacks slot {{{letter}}}")
    needs_subject = not (mask.use_category or mask.use_class)
    if needs_subject and "SUBJ" not in slots and "S" not in slots:
        raise UnsatisfiableMask(f"form {form.text!r} has no slot for a subject")

    if index is None:
        index = SceneIndex(scene)
    candidates = _candidate_values(mask)
    positive = []
    negative = []
    for z, m, c, s in candidates:
        cat, klass = avoid_tautology(c, s)
        filters = FilterSet(size=z, freshness=m, category=cat, obj_class=klass)
        (positive if index.count(filters) > 0 else negative).append((z, m, cat, klass))
    want_positive = rng.random() < profile.target_positive_fraction
    pool = positive if want_positive else negative
    if not pool:
        pool = negative if want_positive else positive
    size, freshness, category, obj_class = rng.choice(pool)

    program = QueryProgram(
        filters=FilterSet(size=size, freshness=freshness, category=category, obj_class=obj_class),
        head=template.head,
    )
    answer = evaluate(program, scene)

    fills = {
        "Z": _surface(size.value, False, lexicon, profile, rng) if size else "",
        "M": _surface(freshness.value, False, lexicon, profile, rng) if freshness else "",
        "C": _surface(category.value, form.plural, lexicon, profile, rng) if category else "",
        "S": _surface(obj_class.value, form.plural, lexicon, profile, rng) if obj_class else "",
        "SUBJ": "",
    }
    if needs_subject:
        subject = rng.choice(lexicon.subjects)
        slot = "SUBJ" if "SUBJ" in slots else "S"
        fills[slot] = _surface(subject, form.plural, lexicon, profile, rng)
    text = form.text
    for slot, value in fills.items():
        text = text.replace("{" + slot + "}", value)
    question_text = " ".join(text.split())

    return GeneratedQA(
        question_text=question_text,
        program=program,
        answer=answer,
        template_id=template.template_id,
        mask=mask,
        profile_name=profile.name,
        scene_id=scene.scene_id,
        form_length=form.length,
    )


def generate_qa_set(
    scene: Scene,
    n: int,
    templates: TemplateSet,
    lexicon: Lexicon,
    profile: DistributionProfile,
    rng: random.Random,
    max_attempts: int = 30,
) -> list[GeneratedQA]:
    """n QA records for one scene; duplicate texts are resampled up to a
    budget and then allowed."""
    if n <= 0:
        raise ValueError("n must be positive")
    if not templates.templates:
        raise ValueError("cannot generate from an empty template set")
    index = SceneIndex(scene)
    out: list[GeneratedQA] = []
    seen: set[str] = set()
    for _ in range(n):
        qa: GeneratedQA | None = None
        for attempt in range(max_attempts):
            template = templates.templates[rng.randrange(len(templates.templates))]
            mask = sample_mask(profile, rng)
            try:
                candidate = instantiate(template, mask, scene, lexicon, profile, rng, index)
            except UnsatisfiableMask:
                continue
            qa = candidate
            if candidate.question_text not in seen:
                break
        if qa is None:
            raise UnsatisfiableMask(
                f"no satisfiable question after {max_attempts} attempts"
            )
        seen.add(qa.question_text)
        out.append(qa)
    return out
