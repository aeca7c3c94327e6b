"""Acceptance suite: one test per release criterion, each printing a
PASS line with its measurements (run with `pytest -s` to see them live).
"""

import random
import threading
import time

from fridgeqa.generator import derive_seed, generate_scene
from fridgeqa.harness import distribution_shift_experiment
from fridgeqa.model import Category, ObjectClass, category_of
from fridgeqa.oracle import Number, YesNo, answer_text, enumerate_programs, evaluate
from fridgeqa.parser import GrammarMode, normalize, parse_question
from fridgeqa.pipeline import DatasetConfig, generate_dataset
from fridgeqa.service import FixedSceneSource, QaService
from fridgeqa.templates import generate_qa_set, get_profile

from helpers import fig_5b_scene
from reference_eval import ref_answer

CLASS_TOKENS = {c.value for c in ObjectClass}
CATEGORY_TOKENS = {c.value for c in Category}


def test_oracle_equivalence_1000_scenes():
    """All 1,620 programs on 1,000 random scenes match the independent
    nested-loop evaluator exactly; budget 30 s."""
    started = time.perf_counter()
    programs = enumerate_programs()
    assert len(programs) == 1620
    checked = 0
    for seed in range(1000):
        scene = generate_scene(seed)
        triples = [(o.obj_class.value, o.size.value, o.freshness.value) for o in scene.objects]
        for program in programs:
            f = program.filters
            kind, value = ref_answer(
                program.head.value,
                f.size.value if f.size else None,
                f.freshness.value if f.freshness else None,
                f.category.value if f.category else None,
                f.obj_class.value if f.obj_class else None,
                triples,
            )
            expected = Number(value) if kind == "number" else YesNo(value)
            assert evaluate(program, scene) == expected
            checked += 1
    elapsed = time.perf_counter() - started
    assert checked == 1_620_000
    assert elapsed < 30.0
    print(f"PASS: oracle equivalence, {checked} evaluations in {elapsed:.1f}s")


def test_qualitative_dialogue_reproduction():
    """Hand-encoded showcase scene: 3 meat (2 expired) + 1 expired banana;
    'how many spoiled stuff' -> 3, 'any vegetable' -> no."""
    scene = fig_5b_scene()

    def answer(question):
        return answer_text(evaluate(parse_question(question, GrammarMode.EXTENDED), scene))

    assert answer("how many spoiled stuff") == "3"
    assert answer("any vegetable") == "no"
    print("PASS: qualitative reproduction ('how many spoiled stuff' -> 3, 'any vegetable' -> no)")


def test_round_trip_soundness_10k_per_profile(templates, lexicon):
    """10,000 QA pairs per profile; extended-mode parse+evaluate reproduces
    every recorded answer; budget 60 s."""
    started = time.perf_counter()
    for profile_name in ("original", "modified"):
        profile = get_profile(profile_name)
        count = 0
        scene_i = 0
        while count < 10_000:
            scene = generate_scene(
                derive_seed(2026, "roundtrip", profile_name, scene_i), scene_id=scene_i
            )
            rng = random.Random(derive_seed(2026, "roundtrip-qa", profile_name, scene_i))
            for qa in generate_qa_set(scene, 30, templates, lexicon, profile, rng):
                program = parse_question(qa.question_text, GrammarMode.EXTENDED, lexicon)
                assert evaluate(program, scene) == qa.answer, qa
                count += 1
        assert count >= 10_000
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0
    print(f"PASS: round-trip soundness, 2 x 10,000+ questions in {elapsed:.1f}s")


def test_distribution_shift_table():
    """2x2 grammar x profile table: original grammar drops to ~0.35 on the
    modified profile (the 65% short-form mass) and the extended grammar
    recovers to 1.0 everywhere."""
    report = distribution_shift_experiment(master_seed=2026, scenes_per_profile=100)
    assert report.accuracy("original", "original") == 1.0
    assert report.accuracy("extended", "original") == 1.0
    assert report.accuracy("extended", "modified") == 1.0
    drop = report.accuracy("original", "modified")
    assert abs(drop - 0.35) <= 0.05
    # every miss in that cell must be an out-of-grammar refusal, not a wrong answer
    cell = report.cells[("original", "modified")]
    assert cell.parse_errors == cell.total - cell.correct
    print("PASS: distribution shift table\n" + report.table_text())


def test_dataset_determinism_and_scale(tmp_path):
    """Desk scale (600/100/100 scenes x 30 QA -> 18k/3k/3k pairs) twice,
    byte-identical, within 5 minutes."""
    started = time.perf_counter()
    manifests = [
        generate_dataset(DatasetConfig(master_seed=7, output_dir=tmp_path / run))
        for run in ("run-a", "run-b")
    ]
    elapsed = time.perf_counter() - started
    first, second = manifests
    assert [s.scenes for s in first.splits] == [600, 100, 100]
    assert [s.questions for s in first.splits] == [18_000, 3_000, 3_000]
    for a, b in zip(first.splits, second.splits):
        assert a.scenes_sha256 == b.scenes_sha256
        assert a.questions_sha256 == b.questions_sha256
    assert (tmp_path / "run-a" / "manifest.json").read_bytes() == (
        tmp_path / "run-b" / "manifest.json"
    ).read_bytes()
    assert elapsed < 300.0
    print(f"PASS: dataset determinism and scale, two desk-scale runs in {elapsed:.1f}s")


def test_generation_hygiene_100k(templates, lexicon):
    """100k generated questions: zero category+own-class tautologies and a
    positive-answer fraction within +/-0.1 of the 0.5 target."""
    total = positives = 0
    scene_i = 0
    per_profile = 50_000
    for profile_name in ("original", "modified"):
        profile = get_profile(profile_name)
        count = 0
        while count < per_profile:
            scene = generate_scene(
                derive_seed(31, "hygiene", profile_name, scene_i), scene_id=scene_i
            )
            rng = random.Random(derive_seed(31, "hygiene-qa", profile_name, scene_i))
            for qa in generate_qa_set(scene, 30, templates, lexicon, profile, rng):
                tokens = set(normalize(qa.question_text, lexicon).tokens)
                classes = tokens & CLASS_TOKENS
                categories = tokens & CATEGORY_TOKENS
                for cls in classes:
                    assert category_of(ObjectClass(cls)).value not in categories, qa
                assert not (classes and categories), qa
                positives += bool(qa.answer.value)
                count += 1
            scene_i += 1
        total += count
    assert total >= 100_000
    fraction = positives / total
    assert abs(fraction - 0.5) <= 0.1
    print(f"PASS: generation hygiene, {total} questions, 0 tautologies, "
          f"positive fraction {fraction:.3f}")


def test_service_under_load(templates, lexicon):
    """50 concurrent clients x 20 questions against a fixed scene: 1,000
    distinct ids answered exactly once with oracle-exact answers, mean
    batch size > 1, and p99 parse+evaluate latency well under 100 ms."""
    scene = generate_scene(4242)
    corpus = generate_qa_set(
        scene, 40, templates, lexicon, get_profile("modified"), random.Random(1)
    )
    questions = [qa.question_text for qa in corpus]
    offline = {
        q: answer_text(evaluate(parse_question(q, GrammarMode.EXTENDED, lexicon), scene))
        for q in questions
    }

    service = QaService(FixedSceneSource(scene), max_batch=32)
    results: list[tuple[str, object]] = []
    lock = threading.Lock()

    def client(cid: int) -> None:
        for i in range(20):
            question = questions[(cid * 20 + i) % len(questions)]
            response = service.ask(f"client-{cid}", question, timeout=30)
            with lock:
                results.append((question, response))

    with service:
        threads = [threading.Thread(target=client, args=(c,)) for c in range(50)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()

    assert len(results) == 1000
    ids = [r.request_id for _, r in results]
    assert len(set(ids)) == 1000
    assert sorted(ids) == list(range(1, 1001))
    for question, response in results:
        assert response.answer_text == offline[question]
        assert service.response_for(response.request_id) == response

    mean_batch = service.mean_batch_size()
    assert mean_batch > 1.0
    latencies = sorted(r.timing.parse_ms + r.timing.evaluate_ms for _, r in results)
    p99 = latencies[int(0.99 * len(latencies))]
    assert p99 < 50.0  # well under the ~100 ms budget
    print(f"PASS: service under load, 1000 requests, mean batch size {mean_batch:.1f}, "
          f"p99 parse+evaluate {p99:.2f} ms")
