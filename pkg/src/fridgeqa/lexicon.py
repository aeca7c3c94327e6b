"""Surface vocabulary: synonym tables, plural forms, subjects, stopwords."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .model import Category, ObjectClass


@dataclass
class Lexicon:
    """Maps between canonical tokens and their surface forms.

    ``synonyms`` maps a canonical token to its surface forms, first one
    being the display form; ``plurals`` maps a surface form to its plural.
    Multi-word surfaces ("coke can") are supported and merged back into
    their canonical token during normalization.
    """

    synonyms: dict[str, tuple[str, ...]]
    plurals: dict[str, str]
    subjects: tuple[str, ...]
    stopwords: frozenset[str]
    _canonical_of: dict[str, str] = field(init=False, repr=False)
    _phrases: dict[str, str] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        canonical_of: dict[str, str] = {}
        phrases: dict[str, str] = {}
        for canon, surfaces in self.synonyms.items():
            if not surfaces:
                raise ValueError(f"empty synonym list for {canon!r}")
            spellings = {canon, canon.replace("-", " ")}
            if not spellings.intersection(surfaces):
                raise ValueError(f"synonyms of {canon!r} must include the token itself")
            for surface in surfaces:
                for form in (surface, self.plurals.get(surface)):
                    if form is None:
                        continue
                    canonical_of[form] = canon
                    if " " in form:
                        phrases[form] = canon
        self._canonical_of = canonical_of
        self._phrases = phrases

    def canonical_for(self, surface: str) -> str | None:
        return self._canonical_of.get(surface)

    def display(self, canonical: str, plural: bool = False) -> str:
        surface = self.synonyms[canonical][0]
        return self.plural_of(surface) if plural else surface

    def alternates(self, canonical: str) -> tuple[str, ...]:
        """Non-display synonym surfaces, possibly empty."""
        return self.synonyms[canonical][1:]

    def plural_of(self, surface: str) -> str:
        return self.plurals.get(surface, surface)

    def max_phrase_words(self) -> int:
        if not self._phrases:
            return 1
        return max(p.count(" ") + 1 for p in self._phrases)

    def phrase_canonical(self, phrase: str) -> str | None:
        return self._phrases.get(phrase)


def load_lexicon(source: str) -> Lexicon:
    """Parse the line-oriented lexicon format (see data/lexicon.txt)."""
    synonyms: dict[str, tuple[str, ...]] = {}
    plurals: dict[str, str] = {}
    subjects: list[str] = []
    stopwords: set[str] = set()
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        kind, _, rest = line.partition(" ")
        rest = rest.strip()
        if kind in ("canon", "plural"):
            key, sep, value = rest.partition(":")
            if not sep or not value.strip():
                raise ValueError(f"lexicon line {lineno}: expected '<key>: <value>'")
            key = key.strip()
            if kind == "canon":
                forms = tuple(s.strip() for s in value.split(",") if s.strip())
                if key in synonyms:
                    raise ValueError(f"lexicon line {lineno}: duplicate canon {key!r}")
                synonyms[key] = forms
            else:
                plurals[key] = value.strip()
        elif kind == "subject":
            subjects.append(rest)
        elif kind == "stopword":
            stopwords.add(rest)
        else:
            raise ValueError(f"lexicon line {lineno}: unknown record {kind!r}")
    lex = Lexicon(
        synonyms=synonyms,
        plurals=plurals,
        subjects=tuple(subjects),
        stopwords=frozenset(stopwords),
    )
    _check_taxonomy_coverage(lex)
    return lex


def _check_taxonomy_coverage(lex: Lexicon) -> None:
    """Every class, category, and subject token needs surfaces and plurals."""
    required = [c.value for c in ObjectClass] + [c.value for c in Category]
    required += list(lex.subjects)
    for canon in required:
        if canon not in lex.synonyms:
            raise ValueError(f"lexicon missing canonical token {canon!r}")
        for surface in lex.synonyms[canon]:
            if surface not in lex.plurals:
                raise ValueError(f"lexicon missing plural for surface {surface!r}")


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    text = resources.files("fridgeqa.data").joinpath("lexicon.txt").read_text("utf-8")
    return load_lexicon(text)
