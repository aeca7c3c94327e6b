"""Queued, batched question answering service.

Many producer threads call submit()/ask(); one executor thread drains the
queue in batches, binds a single scene snapshot to each batch, and answers
every item through normalize -> parse (extended grammar) -> evaluate.
Shared state is confined to the bounded queue, the response registry, the
snapshot store, and the feedback log, each guarded by its own lock.
"""

from __future__ import annotations

import itertools
import json
import queue
import random
import threading
import time
from collections import OrderedDict
from dataclasses import dataclass
from pathlib import Path

from .generator import DEFAULT_SCENE_CONFIG, SceneConfig, derive_seed, generate_scene
from .lexicon import Lexicon, default_lexicon
from .model import Scene
from .oracle import answer_text, evaluate, program_to_text
from .parser import GrammarMode, ParseError, parse_question
from .schematic import render_schematic

APOLOGY_TEXT = (
    "sorry, i did not understand that question. "
    "you can check the fridge yourself via the snapshot link."
)

VALID_REACTIONS = ("like", "dislike")
EMOJI_PREFIX = "emoji:"


class QueueFull(Exception):
    pass


class UnknownRequestId(Exception):
    pass


@dataclass(frozen=True)
class AskRequest:
    session_id: str
    text: str
    received_at: float

    def __post_init__(self) -> None:
        if not self.session_id:
            raise ValueError("session_id must be non-empty")


@dataclass(frozen=True)
class Timing:
    queue_ms: float
    parse_ms: float
    evaluate_ms: float
    total_ms: float


@dataclass(frozen=True)
class AskResponse:
    request_id: int
    answer_text: str
    program_text: str | None
    scene_version: str
    snapshot_link: str
    timing: Timing


@dataclass(frozen=True)
class FeedbackRecord:
    request_id: int
    reaction: str
    timestamp: float


class _Pending:
    __slots__ = ("request_id", "request", "done", "response")

    def __init__(self, request_id: int, request: AskRequest):
        self.request_id = request_id
        self.request = request
        self.done = threading.Event()
        self.response: AskResponse | None = None


class FixedSceneSource:
    """Always the same scene; the test and scripted-load configuration."""

    def __init__(self, scene: Scene):
        self._scene = scene

    def current(self) -> Scene:
        return self._scene


class SeededRotationSource:
    """Regenerates the scene from a derived seed every ``rotate_every`` polls."""

    def __init__(
        self,
        master_seed: int,
        rotate_every: int = 10,
        config: SceneConfig = DEFAULT_SCENE_CONFIG,
    ):
        if rotate_every < 1:
            raise ValueError("rotate_every must be >= 1")
        self._master_seed = master_seed
        self._rotate_every = rotate_every
        self._config = config
        self._polls = 0
        self._epoch = -1
        self._scene: Scene | None = None

    def current(self) -> Scene:
        epoch = self._polls // self._rotate_every
        self._polls += 1
        if epoch != self._epoch:
            self._epoch = epoch
            self._scene = generate_scene(
                derive_seed(self._master_seed, "rotation", epoch), self._config, scene_id=epoch
            )
        return self._scene


class LiveSceneSource(SeededRotationSource):
    """A fresh scene for every batch, standing in for a live camera."""

    def __init__(self, master_seed: int, config: SceneConfig = DEFAULT_SCENE_CONFIG):
        super().__init__(master_seed, rotate_every=1, config=config)


class QaService:
    def __init__(
        self,
        scene_source,
        lexicon: Lexicon | None = None,
        max_batch: int = 8,
        queue_bound: int = 1024,
        batch_linger_s: float = 0.002,
        feedback_log: Path | str | None = None,
        snapshot_retention: int = 64,
    ):
        self._scene_source = scene_source
        self._lexicon = lexicon or default_lexicon()
        self.max_batch = max_batch
        self._queue: queue.Queue[_Pending] = queue.Queue(maxsize=queue_bound)
        self._batch_linger_s = batch_linger_s
        self._ids = itertools.count(1)
        self._id_lock = threading.Lock()
        self._registry: dict[int, AskResponse] = {}
        self._registry_lock = threading.Lock()
        self._snapshots: OrderedDict[str, str] = OrderedDict()
        self._snapshot_retention = snapshot_retention
        self._snapshot_lock = threading.Lock()
        self._scene_versions = 0
        self._feedback_path = Path(feedback_log) if feedback_log else None
        self._feedback_lock = threading.Lock()
        self.batch_sizes: list[int] = []
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    # -- producer side -------------------------------------------------

    def _submit(self, session_id: str, text: str) -> _Pending:
        request = AskRequest(session_id=session_id, text=text, received_at=time.perf_counter())
        with self._id_lock:
            request_id = next(self._ids)
        pending = _Pending(request_id, request)
        try:
            self._queue.put_nowait(pending)
        except queue.Full:
            raise QueueFull(f"queue is at its bound of {self._queue.maxsize}") from None
        return pending

    def submit(self, session_id: str, text: str) -> int:
        """Enqueue a question; returns its unique id immediately."""
        return self._submit(session_id, text).request_id

    def ask(self, session_id: str, text: str, timeout: float = 30.0) -> AskResponse:
        """Synchronous façade over submit + batch execution."""
        pending = self._submit(session_id, text)
        if not pending.done.wait(timeout):
            raise TimeoutError(f"request {pending.request_id} not answered within {timeout}s")
        return pending.response

    def response_for(self, request_id: int) -> AskResponse | None:
        with self._registry_lock:
            return self._registry.get(request_id)

    # -- batch executor -------------------------------------------------

    def drain_batch(self, max_batch: int | None = None) -> list[AskResponse]:
        """Atomically dequeue up to max_batch items, snapshot the scene once,
        and answer them all against that snapshot."""
        limit = max_batch or self.max_batch
        batch: list[_Pending] = []
        while len(batch) < limit:
            try:
                batch.append(self._queue.get_nowait())
            except queue.Empty:
                break
        if not batch:
            return []
        dequeued_at = time.perf_counter()
        scene = self._scene_source.current()
        version = self._store_snapshot(scene)
        responses = []
        for pending in batch:
            response = self._answer(pending, scene, version, dequeued_at)
            with self._registry_lock:
                self._registry[pending.request_id] = response
            pending.response = response
            pending.done.set()
            responses.append(response)
        self.batch_sizes.append(len(batch))
        return responses

    def _answer(
        self, pending: _Pending, scene: Scene, version: str, dequeued_at: float
    ) -> AskResponse:
        queue_ms = (dequeued_at - pending.request.received_at) * 1000.0
        program_text: str | None = None
        t0 = time.perf_counter()
        try:
            program = parse_question(pending.request.text, GrammarMode.EXTENDED, self._lexicon)
            parse_ms = (time.perf_counter() - t0) * 1000.0
            t1 = time.perf_counter()
            answer = evaluate(program, scene)
            evaluate_ms = (time.perf_counter() - t1) * 1000.0
            text = answer_text(answer)
            program_text = program_to_text(program)
        except ParseError:
            parse_ms = (time.perf_counter() - t0) * 1000.0
            evaluate_ms = 0.0
            text = APOLOGY_TEXT
        total_ms = (time.perf_counter() - pending.request.received_at) * 1000.0
        return AskResponse(
            request_id=pending.request_id,
            answer_text=text,
            program_text=program_text,
            scene_version=version,
            snapshot_link=f"/snapshot/{version}",
            timing=Timing(
                queue_ms=queue_ms,
                parse_ms=parse_ms,
                evaluate_ms=evaluate_ms,
                total_ms=total_ms,
            ),
        )

    def _store_snapshot(self, scene: Scene) -> str:
        with self._snapshot_lock:
            self._scene_versions += 1
            version = f"v{self._scene_versions}-s{scene.seed & 0xFFFFFFFF:08x}"
            self._snapshots[version] = render_schematic(scene)
            while len(self._snapshots) > self._snapshot_retention:
                self._snapshots.popitem(last=False)
        return version

    def snapshot_svg(self, version: str) -> str | None:
        with self._snapshot_lock:
            return self._snapshots.get(version)

    def latest_snapshot_version(self) -> str | None:
        with self._snapshot_lock:
            return next(reversed(self._snapshots)) if self._snapshots else None

    # -- feedback --------------------------------------------------------

    def record_feedback(self, request_id: int, reaction: str) -> FeedbackRecord:
        """Append one reaction for an already-answered request to the log."""
        if reaction not in VALID_REACTIONS and not (
            reaction.startswith(EMOJI_PREFIX) and len(reaction) > len(EMOJI_PREFIX)
        ):
            raise ValueError(f"bad reaction {reaction!r}")
        with self._registry_lock:
            answered = request_id in self._registry
        if not answered:
            raise UnknownRequestId(request_id)
        record = FeedbackRecord(request_id=request_id, reaction=reaction, timestamp=time.time())
        if self._feedback_path is not None:
            line = json.dumps(
                {
                    "request_id": record.request_id,
                    "reaction": record.reaction,
                    "timestamp": record.timestamp,
                },
                sort_keys=True,
            )
            with self._feedback_lock:
                with open(self._feedback_path, "a", encoding="utf-8") as fh:
                    fh.write(line + "\n")
        return record

    # -- lifecycle --------------------------------------------------------

    def start(self) -> "QaService":
        if self._thread is not None:
            return self
        self._stop.clear()
        self._thread = threading.Thread(target=self._run, name="qa-batch-executor", daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        if self._thread is None:
            return
        self._stop.set()
        self._thread.join(timeout=5)
        self._thread = None
        self.drain_batch()  # settle anything left behind

    def __enter__(self) -> "QaService":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()

    def _run(self) -> None:
        while not self._stop.is_set():
            if self._queue.empty():
                time.sleep(0.001)
                continue
            if self._batch_linger_s:
                time.sleep(self._batch_linger_s)  # let a batch accumulate
            self.drain_batch()

    # -- metrics -----------------------------------------------------------

    def mean_batch_size(self) -> float:
        return sum(self.batch_sizes) / len(self.batch_sizes) if self.batch_sizes else 0.0


def demo_service(
    master_seed: int = 0,
    rotate_every: int = 0,
    feedback_log: Path | str | None = None,
    max_batch: int = 8,
    queue_bound: int = 1024,
) -> QaService:
    """Service over a generated scene; rotate_every=0 keeps the scene fixed."""
    if rotate_every == 0:
        source = FixedSceneSource(generate_scene(master_seed))
    else:
        source = SeededRotationSource(master_seed, rotate_every=rotate_every)
    return QaService(
        source, max_batch=max_batch, queue_bound=queue_bound, feedback_log=feedback_log
    )
