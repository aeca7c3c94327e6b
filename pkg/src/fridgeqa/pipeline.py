"""Dataset generation pipeline: scenes, QA files, manifest, and statistics.

Files are JSON Lines with sorted keys, so a config + master seed always
reproduces byte-identical output. Each split gets a scenes file (ground
truth with the QA records embedded) plus a flat questions file; the
manifest carries the config echo, counts, and SHA-256 digests.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .generator import DEFAULT_SCENE_CONFIG, SceneConfig, derive_seed, generate_scene
from .model import Freshness, ObjectClass, Scene, SceneObject, Size
from .oracle import (
    Answer,
    Number,
    QueryProgram,
    YesNo,
    evaluate,
    program_from_text,
    program_to_text,
)
from .templates import (
    GeneratedQA,
    VariableMask,
    default_lexicon,
    default_templates,
    generate_qa_set,
    get_profile,
)

SCHEMA_VERSION = 1

DESK_SPLITS = (("train", 600), ("val", 100), ("test", 100))
PAPER_SPLITS = (("train", 60000), ("val", 10000), ("test", 10000))


class SchemaError(ValueError):
    pass


class SoundnessError(RuntimeError):
    """A generated answer failed re-verification against its scene."""


@dataclass(frozen=True)
class SplitSpec:
    name: str
    scene_count: int


@dataclass(frozen=True)
class DatasetConfig:
    master_seed: int
    splits: tuple[SplitSpec, ...] = tuple(SplitSpec(n, c) for n, c in DESK_SPLITS)
    qa_per_scene: int = 30
    profile_name: str = "original"
    output_dir: Path = Path("dataset")
    scene_config: SceneConfig = DEFAULT_SCENE_CONFIG

    def __post_init__(self) -> None:
        names = [s.name for s in self.splits]
        if len(set(names)) != len(names):
            raise ValueError("split names must be unique")
        if any(s.scene_count <= 0 for s in self.splits):
            raise ValueError("scene_count must be positive")
        if self.qa_per_scene <= 0:
            raise ValueError("qa_per_scene must be positive")
        get_profile(self.profile_name)


@dataclass
class SplitSummary:
    name: str
    scenes: int
    questions: int
    scenes_file: str
    questions_file: str
    scenes_sha256: str
    questions_sha256: str


@dataclass
class DatasetManifest:
    schema_version: int
    config: dict
    splits: list[SplitSummary]

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "config": self.config,
            "splits": [vars(s) for s in self.splits],
        }


def _dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def answer_to_json(answer: Answer) -> dict:
    if isinstance(answer, YesNo):
        return {"kind": "yesno", "value": answer.value}
    return {"kind": "number", "value": answer.value}


def answer_from_json(data: dict) -> Answer:
    if data["kind"] == "yesno":
        return YesNo(bool(data["value"]))
    if data["kind"] == "number":
        return Number(int(data["value"]))
    raise SchemaError(f"unknown answer kind {data.get('kind')!r}")


def scene_to_record(scene: Scene, qa: list[GeneratedQA] | None = None) -> dict:
    return {
        "scene_id": scene.scene_id,
        "seed": scene.seed,
        "objects": [
            {
                "id": o.id,
                "class": o.obj_class.value,
                "size": o.size.value,
                "freshness": o.freshness.value,
                "position": list(o.position),
                "footprint_radius": o.footprint_radius,
                "bbox": list(o.bbox),
            }
            for o in scene.objects
        ],
        "relationships": {
            direction: {str(i): list(ids) for i, ids in by_id.items()}
            for direction, by_id in scene.relationships.items()
        },
        "qa": [qa_to_record(q) for q in qa] if qa is not None else [],
    }


def scene_from_record(record: dict) -> Scene:
    try:
        objects = tuple(
            SceneObject(
                id=o["id"],
                obj_class=ObjectClass(o["class"]),
                size=Size(o["size"]),
                freshness=Freshness(o["freshness"]),
                position=tuple(o["position"]),
                footprint_radius=o["footprint_radius"],
                bbox=tuple(o["bbox"]),
            )
            for o in record["objects"]
        )
        relationships = {
            direction: {int(i): tuple(ids) for i, ids in by_id.items()}
            for direction, by_id in record["relationships"].items()
        }
        return Scene(
            scene_id=record["scene_id"],
            seed=record["seed"],
            objects=objects,
            relationships=relationships,
        )
    except (KeyError, ValueError, TypeError) as err:
        raise SchemaError(f"bad scene record: {err}") from err


def qa_to_record(qa: GeneratedQA) -> dict:
    return {
        "scene_id": qa.scene_id,
        "question_text": qa.question_text,
        "program": program_to_text(qa.program),
        "answer": answer_to_json(qa.answer),
        "template_id": qa.template_id,
        "mask": qa.mask.pattern(),
        "profile_name": qa.profile_name,
        "form_length": qa.form_length,
    }


@dataclass(frozen=True)
class QuestionRecord:
    scene_id: int
    question_text: str
    program: QueryProgram
    answer: Answer
    template_id: str
    mask: VariableMask
    profile_name: str
    form_length: str


def question_from_record(record: dict) -> QuestionRecord:
    try:
        return QuestionRecord(
            scene_id=record["scene_id"],
            question_text=record["question_text"],
            program=program_from_text(record["program"]),
            answer=answer_from_json(record["answer"]),
            template_id=record["template_id"],
            mask=VariableMask.from_pattern(record["mask"]),
            profile_name=record["profile_name"],
            form_length=record["form_length"],
        )
    except (KeyError, ValueError, TypeError) as err:
        raise SchemaError(f"bad question record: {err}") from err


def _read_jsonl(path: Path) -> list[dict]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as err:
                raise SchemaError(f"{path}:{lineno}: invalid JSON: {err}") from err
    return records


def load_scenes(path: Path | str) -> dict[int, Scene]:
    scenes = {}
    for record in _read_jsonl(Path(path)):
        scene = scene_from_record(record)
        scenes[scene.scene_id] = scene
    return scenes


def load_questions(path: Path | str) -> list[QuestionRecord]:
    return [question_from_record(r) for r in _read_jsonl(Path(path))]


def generate_split_scenes(
    master_seed: int,
    split_name: str,
    scene_count: int,
    qa_per_scene: int,
    profile_name: str,
    scene_config: SceneConfig = DEFAULT_SCENE_CONFIG,
    first_scene_id: int = 0,
) -> list[tuple[Scene, list[GeneratedQA]]]:
    """Deterministic scene+QA generation for one split; each scene gets an
    independent sub-seed, so the split could be generated in any order."""
    templates = default_templates()
    lexicon = default_lexicon()
    profile = get_profile(profile_name)
    split_seed = derive_seed(master_seed, "split", split_name)
    out = []
    for i in range(scene_count):
        scene = generate_scene(
            derive_seed(split_seed, "scene", i), scene_config, scene_id=first_scene_id + i
        )
        rng = random.Random(derive_seed(split_seed, "qa", i))
        qa = generate_qa_set(scene, qa_per_scene, templates, lexicon, profile, rng)
        out.append((scene, qa))
    return out


def _verify_soundness(scene: Scene, record: dict) -> None:
    # Re-check from the serialized forms so encoding bugs cannot slip through.
    program = program_from_text(record["program"])
    recorded = answer_from_json(record["answer"])
    actual = evaluate(program, scene)
    if actual != recorded:
        raise SoundnessError(
            f"scene {scene.scene_id}, question {record['question_text']!r}: "
            f"recorded {recorded} but oracle says {actual}"
        )


def generate_dataset(config: DatasetConfig) -> DatasetManifest:
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summaries = []
    next_scene_id = 0
    for split in config.splits:
        pairs = generate_split_scenes(
            config.master_seed,
            split.name,
            split.scene_count,
            config.qa_per_scene,
            config.profile_name,
            config.scene_config,
            first_scene_id=next_scene_id,
        )
        next_scene_id += split.scene_count
        scenes_path = out_dir / f"{split.name}_scenes.jsonl"
        questions_path = out_dir / f"{split.name}_questions.jsonl"
        question_count = 0
        with open(scenes_path, "w", encoding="utf-8", newline="\n") as sf, open(
            questions_path, "w", encoding="utf-8", newline="\n"
        ) as qf:
            for scene, qa in pairs:
                qa_records = [qa_to_record(q) for q in qa]
                for record in qa_records:
                    _verify_soundness(scene, record)
                    qf.write(_dumps(record) + "\n")
                question_count += len(qa_records)
                sf.write(_dumps(scene_to_record(scene, qa)) + "\n")
        summaries.append(
            SplitSummary(
                name=split.name,
                scenes=split.scene_count,
                questions=question_count,
                scenes_file=scenes_path.name,
                questions_file=questions_path.name,
                scenes_sha256=_sha256(scenes_path),
                questions_sha256=_sha256(questions_path),
            )
        )
    manifest = DatasetManifest(
        schema_version=SCHEMA_VERSION,
        config={
            "master_seed": config.master_seed,
            "qa_per_scene": config.qa_per_scene,
            "profile_name": config.profile_name,
            "splits": [{"name": s.name, "scene_count": s.scene_count} for s in config.splits],
            "scene_config": vars(config.scene_config),
        },
        splits=summaries,
    )
    with open(out_dir / "manifest.json", "w", encoding="utf-8", newline="\n") as mf:
        json.dump(manifest.to_dict(), mf, sort_keys=True, indent=2)
        mf.write("\n")
    return manifest


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


@dataclass
class CorpusStats:
    total: int = 0
    per_head: dict[str, int] = field(default_factory=dict)
    short_fraction: float = 0.0
    long_fraction: float = 0.0
    mask_histogram: dict[str, int] = field(default_factory=dict)
    positive_fraction: float = 0.0

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "per_head": dict(sorted(self.per_head.items())),
            "short_fraction": self.short_fraction,
            "long_fraction": self.long_fraction,
            "mask_histogram": dict(sorted(self.mask_histogram.items())),
            "positive_fraction": self.positive_fraction,
        }


def corpus_stats(questions_path: Path | str) -> CorpusStats:
    records = load_questions(questions_path)
    stats = CorpusStats(total=len(records))
    if not records:
        return stats
    short = 0
    positive = 0
    for rec in records:
        stats.per_head[rec.program.head.value] = stats.per_head.get(rec.program.head.value, 0) + 1
        pattern = rec.mask.pattern()
        stats.mask_histogram[pattern] = stats.mask_histogram.get(pattern, 0) + 1
        if rec.form_length == "short":
            short += 1
        if isinstance(rec.answer, YesNo):
            positive += 1 if rec.answer.value else 0
        else:
            positive += 1 if rec.answer.value > 0 else 0
    stats.short_fraction = short / len(records)
    stats.long_fraction = 1.0 - stats.short_fraction
    stats.positive_fraction = positive / len(records)
    return stats
