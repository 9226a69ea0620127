from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from scenebench.errors import ContractViolation, UndefinedMetricError
from scenebench.metrics import EpisodeResult, aggregate, ecr, scr, spl

from oracles import ecr_oracle, scr_oracle, spl_oracle


def result(success, l, p, task="object_loconav", **kw):
    return EpisodeResult(
        episode_id="e", task=task, success=success,
        taken_path_length=p, shortest_path_length=l, **kw,
    )


# -- SPL -----------------------------------------------------------------------


def test_spl_single_success_half():
    assert spl([result(True, 10.0, 20.0)]) == pytest.approx(0.5)


def test_spl_all_failures_zero():
    assert spl([result(False, 10.0, 20.0), result(False, 5.0, 1.0)]) == 0.0


def test_spl_shortcut_clamped_to_one():
    # taken path shorter than the sampled ground truth: the max() clamps to 1
    assert spl([result(True, 10.0, 7.0)]) == pytest.approx(1.0)


def test_spl_empty_undefined():
    with pytest.raises(UndefinedMetricError):
        spl([])


# -- ECR ------------------------------------------------------------------------


def test_ecr_two_rounds_to_singleton():
    assert ecr([5, 3, 1]) == pytest.approx(1.0)


def test_ecr_one_round():
    assert ecr([5, 3]) == pytest.approx(0.5)


def test_ecr_no_questions_zero():
    assert ecr([4]) == 0.0


def test_ecr_singleton_guard():
    assert ecr([1]) == 1.0
    assert ecr([1, 1]) == 1.0


def test_ecr_increasing_history_rejected():
    with pytest.raises(ContractViolation):
        ecr([3, 5])


# -- SCR --------------------------------------------------------------------------


def test_scr_examples():
    assert scr([True, False]) == pytest.approx(0.5)
    assert scr([True, True]) == 1.0
    assert scr([False]) == 0.0


def test_scr_empty_undefined():
    with pytest.raises(UndefinedMetricError):
        scr([])


# -- rational-arithmetic oracles ----------------------------------------------------


@settings(max_examples=250, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.booleans(),
            st.integers(min_value=1, max_value=50),
            st.integers(min_value=0, max_value=60),
        ),
        min_size=1,
        max_size=8,
    )
)
def test_spl_matches_rational_oracle(raw):
    triples = [(s, Fraction(l), Fraction(p)) for s, l, p in raw]
    results = [result(s, float(l), float(p)) for s, l, p in triples]
    assert spl(results) == pytest.approx(float(spl_oracle(triples)), abs=1e-12)


@settings(max_examples=250, deadline=None)
@given(st.data())
def test_ecr_matches_rational_oracle(data):
    start = data.draw(st.integers(min_value=1, max_value=12))
    sizes = [start]
    for _ in range(data.draw(st.integers(min_value=0, max_value=4))):
        sizes.append(data.draw(st.integers(min_value=1, max_value=sizes[-1])))
    assert ecr(sizes) == pytest.approx(float(ecr_oracle(sizes)), abs=1e-12)


@settings(max_examples=250, deadline=None)
@given(st.lists(st.booleans(), min_size=1, max_size=10))
def test_scr_matches_rational_oracle(flags):
    assert scr(flags) == pytest.approx(float(scr_oracle(flags)), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.booleans(),
            st.integers(min_value=1, max_value=50),
            st.integers(min_value=0, max_value=60),
        ),
        min_size=1,
        max_size=8,
    )
)
def test_spl_never_exceeds_sr(raw):
    results = [result(s, float(l), float(p)) for s, l, p in raw]
    report = aggregate(results)
    assert 0.0 <= report.spl_pct <= report.sr_pct + 1e-9


# -- aggregation -------------------------------------------------------------------


def test_aggregate_single_success():
    report = aggregate([result(True, 10.0, 12.0, reset_count=3)])
    assert report.sr_pct == 100.0
    assert report.rt_mean == 3
    assert report.pl_mean == pytest.approx(12.0)


def test_aggregate_mixed_tasks_rejected():
    with pytest.raises(ContractViolation):
        aggregate([result(True, 1.0, 1.0), result(True, 1.0, 1.0, task="loco_manip")])


def test_aggregate_social_carries_ecr():
    r = result(True, 10.0, 12.0, task="social_loconav",
               candidate_history=(5, 3), dialogue_rounds=1)
    report = aggregate([r])
    assert report.ecr_mean == pytest.approx(0.5)
    assert "ECR" in report.render()


def test_aggregate_manip_rt_dash_when_no_resets():
    r = result(False, 10.0, 0.5, task="loco_manip", condition_flags=(True, False))
    report = aggregate([r])
    assert report.scr_mean == pytest.approx(0.5)
    assert report.rt_mean is None
    assert "-" in report.render()


def test_report_rendering_two_decimals():
    report = aggregate([result(True, 9.0, 27.0)])
    rendered = report.render()
    assert "33.33" in rendered  # SPL percentage at two decimals
    assert "100.00" in rendered


# -- placement condition checking ---------------------------------------------


def test_check_conditions_on_and_nearby(house_wkm):
    from scenebench.metrics import check_conditions
    from scenebench.taskgen.episodes import PlacementCondition
    from scenebench.wkm import InfoCondition

    scene_nodes = house_wkm.graph.nodes
    book = scene_nodes["book/lr1"]
    teatable = scene_nodes["teatable/lr1"]

    on_cond = PlacementCondition("on", InfoCondition(category="teatable"), "teatable/lr1")
    near_cond = PlacementCondition("nearby", InfoCondition(category="couch"), "couch/lr1")

    # placed squarely on the teatable top
    cx = (teatable.min_points[0] + teatable.max_points[0]) / 2
    cy = (teatable.min_points[1] + teatable.max_points[1]) / 2
    on_top = book.translated((cx, cy, teatable.max_points[2]))
    assert check_conditions(on_top, [on_cond], house_wkm) == [True]
    # the couch is 0.3 m away from the teatable: both conditions hold here
    assert check_conditions(on_top, [on_cond, near_cond], house_wkm) == [True, True]

    # placed on the floor 2 m from every couch: nearby fails at the 1.5 m gate
    far = book.translated((5.5, 5.5, 0.0))
    flags = check_conditions(far, [on_cond, near_cond], house_wkm)
    assert flags == [False, False]

    # satisfying one of two conditions gives SCR 0.5
    beside_couch = book.translated((2.8, 9.0, 0.0))  # 0.4 m from the couch, on the floor
    flags = check_conditions(beside_couch, [on_cond, near_cond], house_wkm)
    assert flags == [False, True]
    assert scr(flags) == pytest.approx(0.5)


def test_unplaced_object_satisfies_nothing(house_wkm):
    from scenebench.metrics import check_conditions
    from scenebench.taskgen.episodes import PlacementCondition
    from scenebench.wkm import InfoCondition

    cond = PlacementCondition("on", InfoCondition(category="table"), "table/k1")
    assert check_conditions(None, [cond, cond], house_wkm) == [False, False]
