"""Acceptance criteria, one test per criterion, each printing a pass line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
timing lines.
"""

import json
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from scenebench.bench import BenchContext, make_agent, run_episode
from scenebench.cli import main as cli_main
from scenebench.config import SimConfig
from scenebench.fixtures import house_scene
from scenebench.metrics import aggregate, ecr, scr, spl
from scenebench.metrics.core import EpisodeResult
from scenebench.npc import QAItem, score_item, score_qa
from scenebench.sim import Action, Simulator
from scenebench.taskgen import EpisodeGenerator, perturb_utterance
from scenebench.wkm import TokenCosineProvider, ground_utterance, render_utterance

from oracles import SweptDiscChecker, ecr_oracle, scr_oracle, spl_oracle
from wkm_cases import CASES, Fixtures


def report(name: str, detail: str, started: float, budget: float) -> None:
    elapsed = time.monotonic() - started
    print(f"[PASS] {name}: {detail} ({elapsed:.2f}s < {budget:.0f}s budget)")
    assert elapsed < budget, f"{name} exceeded its {budget}s budget"


@pytest.fixture(scope="module")
def house_gen():
    return EpisodeGenerator(house_scene())


@pytest.fixture(scope="module")
def house_ctx(house_gen):
    context = BenchContext(house_gen.scene, house_gen.config)
    context.occupancy = house_gen.occupancy
    return context


def test_algorithm_conformance():
    """find_diff/get_info/filter match hand-traced outputs on >= 20 cases."""
    started = time.monotonic()
    fixtures = Fixtures()
    assert len(CASES) >= 20
    for name, fn in CASES:
        fn(fixtures)
    report("algorithm conformance", f"{len(CASES)} hand-traced cases exact", started, 1.0)


def test_uniqueness_guarantee(house_gen):
    """300 seeded navigation episodes: the constraint trace filters the
    category candidates to exactly the target."""
    episodes = house_gen.generate_batch("object_loconav", 300, seed=7)
    started = time.monotonic()
    unique = 0
    for episode in episodes:
        category = house_gen.scene.objects[episode.target].category
        candidates = set(house_gen.scene.by_category(category))
        for condition in episode.constraint_trace:
            candidates = house_gen.wkm.filter(candidates, condition)
        unique += candidates == {episode.target}
    assert unique == 300
    report("uniqueness guarantee", "300/300 traces fold to the target", started, 10.0)


def _unambiguous_rounds(wkm):
    """(target, anchor, relation) triples whose template description resolves
    uniquely.

    Judged independently from the grounding scorer by raw attribute sets: a
    "<color> <category>" phrase denotes every object of that category whose
    captions mention the color, so a description is unambiguous only when that
    set is a singleton within its pool."""
    nodes = wkm.graph.nodes

    def phrase_of(oid):
        attrs = wkm.attributes[oid]
        color = sorted(attrs.colors)[0] if attrs.colors else None
        return (nodes[oid].category, color)

    def denotes(oid, category, color):
        if nodes[oid].category != category:
            return False
        return color is None or color in wkm.attributes[oid].colors

    def unique_in(pool, oid):
        category, color = phrase_of(oid)
        return sum(1 for other in pool if denotes(other, category, color)) == 1

    rounds = []
    for anchor in sorted(nodes):
        if not unique_in(list(nodes), anchor):
            continue  # anchor description must single it out scene-wide
        for relation in ("near", "on", "under", "above", "in"):
            neighbors = [e.target for e in wkm.graph.edges_of(anchor)
                         if e.relation == relation]
            for target in neighbors:
                if unique_in(neighbors, target):
                    rounds.append((target, anchor, relation))
    return rounds


def test_referring_grounding_round_trip(house_wkm, five_wkm):
    started = time.monotonic()
    clean_total = clean_ok = 0
    perturbed_total = perturbed_ok = 0
    rng = np.random.default_rng(13)
    for wkm in (five_wkm, house_wkm):
        for target, anchor, relation in _unambiguous_rounds(wkm):
            utterance = render_utterance(wkm, target, anchor, relation)
            clean_total += 1
            try:
                clean_ok += ground_utterance(wkm, utterance) == target
            except Exception:
                pass
            mangled = perturb_utterance(utterance, rng, p_hide_category=0.0,
                                        p_relation=0.6, p_adjust=0.6)
            perturbed_total += 1
            try:
                perturbed_ok += ground_utterance(wkm, mangled) == target
            except Exception:
                pass
    assert clean_total >= 20
    assert clean_ok == clean_total, f"clean round-trip {clean_ok}/{clean_total}"
    assert perturbed_ok / perturbed_total >= 0.95
    report(
        "referring-grounding round trip",
        f"clean {clean_ok}/{clean_total}, perturbed {perturbed_ok}/{perturbed_total}",
        started, 30.0,
    )


def test_metric_formulas():
    started = time.monotonic()
    rng = random.Random(99)
    for _ in range(1000):
        n = rng.randint(1, 8)
        triples = [
            (rng.random() < 0.5, Fraction(rng.randint(1, 50)), Fraction(rng.randint(0, 60)))
            for _ in range(n)
        ]
        results = [
            EpisodeResult("e", "object_loconav", s, float(p), float(l))
            for s, l, p in triples
        ]
        assert spl(results) == pytest.approx(float(spl_oracle(triples)), abs=1e-12)

        sizes = [rng.randint(1, 12)]
        for _ in range(rng.randint(0, 4)):
            sizes.append(rng.randint(1, sizes[-1]))
        assert ecr(sizes) == pytest.approx(float(ecr_oracle(sizes)), abs=1e-12)

        flags = [rng.random() < 0.5 for _ in range(rng.randint(1, 6))]
        assert scr(flags) == pytest.approx(float(scr_oracle(flags)), abs=1e-12)

    assert ecr([5, 3, 1]) == 1.0
    assert ecr([5, 3]) == 0.5
    assert scr([True, False]) == 0.5
    report("metric formulas", "1000 rational-oracle trials at 1e-12 + pinned examples",
           started, 30.0)


def test_path_sampling(house_gen):
    started = time.monotonic()
    planner = house_gen.planner
    checker = SweptDiscChecker(house_gen.occupancy)
    targets = house_gen.pathable_targets()
    rng = np.random.default_rng(17)
    clean = 0
    for i in range(1000):
        obj = house_gen.scene.objects[targets[i % len(targets)]]
        path = planner.sample_path(obj, rng)
        assert 7.0 <= path.length <= 20.0
        clean += checker.is_collision_free(path.waypoints, 0.34)
    assert clean == 1000
    report("path sampling", "1000/1000 paths clear 0.34 m, lengths in [7, 20] m",
           started, 60.0)


def test_budget_semantics(house_gen, house_ctx):
    started = time.monotonic()
    episode = house_gen.generate_batch("object_loconav", 1, seed=5)[0]
    sim = Simulator(house_ctx.scene, house_ctx.occupancy, episode, SimConfig())
    sim.reset()
    _, outcome = sim.step(Action("move_forward", 2.0))
    assert outcome.steps_charged == 960

    sim.reset()
    total = 0
    while not sim.terminated:
        _, outcome = sim.step(Action("turn_left_90"))
        total += outcome.steps_charged
    assert total > 14400
    assert sim.success is False and outcome.exhausted
    report("budget semantics", "960 steps for 2 m at 0.5 m/s; overrun ends unsuccessful",
           started, 10.0)


def test_baseline_ordering(house_gen, house_ctx):
    started = time.monotonic()
    episodes = house_gen.generate_batch("object_loconav", 100, seed=3)
    sr = {}
    for name in ("random", "oracle", "modular"):
        results = [
            run_episode(house_ctx, ep, make_agent(name, house_ctx, ep, seed=i), seed=i)
            for i, ep in enumerate(episodes)
        ]
        sr[name] = aggregate(results).sr_pct
    assert sr["random"] < 5.0
    assert sr["oracle"] == 100.0
    assert sr["random"] < sr["modular"] < sr["oracle"]
    report(
        "baseline ordering",
        f"random {sr['random']:.1f} < modular {sr['modular']:.1f} < oracle {sr['oracle']:.1f}",
        started, 300.0,
    )


def test_qa_scoring():
    started = time.monotonic()
    provider = TokenCosineProvider()
    exact = score_item("q", "it is in the kitchen", "it is in the kitchen", provider)
    assert exact.score == 100

    class Fixed:
        def __init__(self, value):
            self.value = value

        def similarity(self, a, b):
            return self.value

    assert score_item("q", "g", "a", Fixed(0.6)).score == 0  # strictly above
    assert score_item("q", "g", "a", Fixed(0.601)).score == 100
    items = [
        QAItem("q1", "g", "a", 0.75, 100),
        QAItem("q2", "g", "a", 0.40, 0),
    ]
    assert score_qa(items) == 50.0
    report("qa scoring", "0.6 strict threshold; mean of {100, 0} exact", started, 5.0)


def test_determinism(tmp_path):
    started = time.monotonic()
    pairs = []
    for tag in ("a", "b"):
        eps = tmp_path / f"eps-{tag}.jsonl"
        res = tmp_path / f"res-{tag}.jsonl"
        assert cli_main(["gen-episodes", "--scene", "house", "--task", "object_loconav",
                         "--count", "10", "--seed", "21", "--out", str(eps)]) == 0
        assert cli_main(["run-bench", "--scene", "house", "--episodes", str(eps),
                         "--agent", "random", "--seed", "4", "--out", str(res)]) == 0
        pairs.append((eps.read_bytes(), res.read_bytes()))
    assert pairs[0] == pairs[1]
    report("determinism", "gen-episodes and run-bench byte-identical across runs",
           started, 120.0)
