"""Accuracy evaluation of answerers, including the grammar-shift experiment.

An answerer takes (question_text, scene) and returns an Answer or raises a
ParseError; refusals count as incorrect, so coverage gaps show up directly
as accuracy loss.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .generator import derive_seed
from .lexicon import Lexicon, default_lexicon
from .model import Scene
from .oracle import Answer, Head, evaluate
from .parser import GrammarMode, ParseError, parse_question
from .pipeline import QuestionRecord, load_questions, load_scenes
from .templates import PROFILES, GeneratedQA
from . import pipeline

Answerer = Callable[[str, Scene], Answer]

HEAD_SLICE = {Head.EXIST: "existence", Head.COUNT: "count"}


class MissingScene(KeyError):
    pass


@dataclass
class SliceStats:
    total: int = 0
    correct: int = 0

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0


@dataclass
class EvalReport:
    total: int = 0
    correct: int = 0
    per_type: dict[str, SliceStats] = field(default_factory=dict)
    error_samples: list[tuple[str, str, str]] = field(default_factory=list)
    parse_errors: int = 0

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "correct": self.correct,
            "accuracy": self.accuracy,
            "parse_errors": self.parse_errors,
            "per_type": {
                name: {"total": s.total, "correct": s.correct, "accuracy": s.accuracy}
                for name, s in sorted(self.per_type.items())
            },
            "error_samples": [
                {"question": q, "expected": e, "got": g} for q, e, g in self.error_samples
            ],
        }


def make_grammar_answerer(mode: GrammarMode, lexicon: Lexicon | None = None) -> Answerer:
    lexicon = lexicon or default_lexicon()

    def answerer(question_text: str, scene: Scene) -> Answer:
        program = parse_question(question_text, mode, lexicon)
        return evaluate(program, scene)

    return answerer


def _slice_keys(record: QuestionRecord) -> tuple[str, ...]:
    head = HEAD_SLICE[record.program.head]
    present = record.program.filters.present()
    sub = "+".join(present) if present else "none"
    return (head, f"{head}:{sub}")


def evaluate_answerer(
    answerer: Answerer,
    questions: list[QuestionRecord],
    scenes: dict[int, Scene],
    max_error_samples: int = 20,
) -> EvalReport:
    """Exact-match scoring of every record; parser errors score as wrong."""
    report = EvalReport(total=len(questions))
    for record in questions:
        if record.scene_id not in scenes:
            raise MissingScene(record.scene_id)
        scene = scenes[record.scene_id]
        got_text = None
        try:
            got = answerer(record.question_text, scene)
            ok = got == record.answer
            if not ok:
                got_text = repr(got)
        except ParseError as err:
            ok = False
            report.parse_errors += 1
            got_text = f"{type(err).__name__}: {err}"
        if ok:
            report.correct += 1
        elif len(report.error_samples) < max_error_samples:
            report.error_samples.append(
                (record.question_text, repr(record.answer), got_text or "")
            )
        for key in _slice_keys(record):
            stats = report.per_type.setdefault(key, SliceStats())
            stats.total += 1
            stats.correct += 1 if ok else 0
    return report


def evaluate_files(
    answerer: Answerer, questions_path: Path | str, scenes_path: Path | str
) -> EvalReport:
    return evaluate_answerer(answerer, load_questions(questions_path), load_scenes(scenes_path))


@dataclass
class ShiftReport:
    """2x2 accuracy table: grammar mode x dataset profile."""

    cells: dict[tuple[str, str], EvalReport]
    scenes_per_profile: int
    qa_per_scene: int

    def accuracy(self, grammar: str, profile: str) -> float:
        return self.cells[(grammar, profile)].accuracy

    def to_dict(self) -> dict:
        return {
            "scenes_per_profile": self.scenes_per_profile,
            "qa_per_scene": self.qa_per_scene,
            "cells": {
                f"{grammar}/{profile}": report.to_dict()
                for (grammar, profile), report in sorted(self.cells.items())
            },
        }

    def table_text(self) -> str:
        profiles = sorted({p for _, p in self.cells})
        grammars = sorted({g for g, _ in self.cells})
        width = max(len(g) for g in grammars) + 2
        lines = ["grammar".ljust(width) + "".join(p.rjust(12) for p in profiles)]
        for grammar in grammars:
            row = grammar.ljust(width)
            for profile in profiles:
                row += f"{self.accuracy(grammar, profile):.4f}".rjust(12)
            lines.append(row)
        return "\n".join(lines)


def distribution_shift_experiment(
    master_seed: int,
    scenes_per_profile: int = 100,
    qa_per_scene: int = 30,
) -> ShiftReport:
    """Generate a test set per profile from disjoint seeds and evaluate both
    grammar modes on both, yielding the drop-and-recovery accuracy pattern."""
    answerers = {
        "original": make_grammar_answerer(GrammarMode.ORIGINAL),
        "extended": make_grammar_answerer(GrammarMode.EXTENDED),
    }
    cells: dict[tuple[str, str], EvalReport] = {}
    for profile_name in sorted(PROFILES):
        pairs = pipeline.generate_split_scenes(
            derive_seed(master_seed, "shift", profile_name),
            f"shift-{profile_name}",
            scenes_per_profile,
            qa_per_scene,
            profile_name,
        )
        scenes = {scene.scene_id: scene for scene, _ in pairs}
        records = [
            pipeline.question_from_record(pipeline.qa_to_record(q))
            for _, qa in pairs
            for q in qa
        ]
        for grammar_name, answerer in answerers.items():
            cells[(grammar_name, profile_name)] = evaluate_answerer(
                answerer, records, scenes
            )
    return ShiftReport(
        cells=cells, scenes_per_profile=scenes_per_profile, qa_per_scene=qa_per_scene
    )
