"""Command line interface: dataset generation, stats, evaluation, serving."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from .harness import distribution_shift_experiment, evaluate_files, make_grammar_answerer
from .parser import GrammarMode
from .pipeline import (
    DESK_SPLITS,
    PAPER_SPLITS,
    DatasetConfig,
    SplitSpec,
    corpus_stats,
    generate_dataset,
)


def _cmd_generate(args: argparse.Namespace) -> int:
    splits = DESK_SPLITS if args.scale == "desk" else PAPER_SPLITS
    config = DatasetConfig(
        master_seed=args.seed,
        splits=tuple(SplitSpec(n, c) for n, c in splits),
        qa_per_scene=args.qa_per_scene,
        profile_name=args.profile,
        output_dir=Path(args.out),
    )
    started = time.perf_counter()
    manifest = generate_dataset(config)
    elapsed = time.perf_counter() - started
    total_q = sum(s.questions for s in manifest.splits)
    total_s = sum(s.scenes for s in manifest.splits)
    print(f"wrote {total_s} scenes / {total_q} questions to {args.out} in {elapsed:.1f}s")
    for s in manifest.splits:
        print(f"  {s.name}: {s.scenes} scenes, {s.questions} questions")
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    stats = corpus_stats(args.questions)
    print(json.dumps(stats.to_dict(), indent=2))
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    mode = GrammarMode.ORIGINAL if args.grammar == "original" else GrammarMode.EXTENDED
    report = evaluate_files(make_grammar_answerer(mode), args.questions, args.scenes)
    payload = report.to_dict()
    print(f"accuracy {report.accuracy:.4f} ({report.correct}/{report.total})")
    if args.report:
        Path(args.report).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"report written to {args.report}")
    return 0


def _cmd_shift(args: argparse.Namespace) -> int:
    report = distribution_shift_experiment(args.seed, args.scenes_per_profile)
    print(report.table_text())
    if args.report:
        Path(args.report).write_text(
            json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8"
        )
        print(f"report written to {args.report}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .httpapi import create_app
    from .service import demo_service

    service = demo_service(
        master_seed=args.scene_seed,
        rotate_every=args.rotate_every,
        feedback_log=args.feedback_log,
        max_batch=args.batch_size,
        queue_bound=args.queue_bound,
    )
    app = create_app(service, ui_dir=args.ui_dir)
    port = int(os.environ.get("FRIDGEQA_PORT", os.environ.get("PORT", "8080")))
    service.start()
    try:
        uvicorn.run(app, host=args.host, port=port)
    finally:
        service.stop()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fridgeqa")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a dataset")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--profile", choices=("original", "modified"), default="original")
    p.add_argument("--scale", choices=("desk", "paper"), default="desk")
    p.add_argument("--qa-per-scene", type=int, default=30)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("stats", help="statistics of a questions file")
    p.add_argument("--questions", required=True)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("eval", help="evaluate a grammar mode on a dataset")
    p.add_argument("--questions", required=True)
    p.add_argument("--scenes", required=True)
    p.add_argument("--grammar", choices=("original", "extended"), default="extended")
    p.add_argument("--report")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("shift-experiment", help="2x2 grammar x profile accuracy table")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scenes-per-profile", type=int, default=100)
    p.add_argument("--report")
    p.set_defaults(func=_cmd_shift)

    p = sub.add_parser("serve", help="run the QA HTTP service (port: FRIDGEQA_PORT or PORT)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--scene-seed", type=int, default=0)
    p.add_argument("--rotate-every", type=int, default=0,
                   help="rotate the scene every N batches; 0 keeps it fixed")
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--queue-bound", type=int, default=1024)
    p.add_argument("--feedback-log", default="feedback.jsonl")
    p.add_argument("--ui-dir", default=None, help="serve a built chat UI from this directory")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
