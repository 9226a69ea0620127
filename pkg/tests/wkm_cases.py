"""Hand-traced conformance cases for the three knowledge interfaces.

Each case pins the exact output of find_diff / get_info / filter (or ground /
similarity) on a small fixture, including the relation nothing-branches and
the category > room > relation > appearance priority. The acceptance suite
re-runs the full table.
"""

from __future__ import annotations

import pytest

from scenebench.errors import ContractViolation, GenerationFailure, GroundingFailure
from scenebench.fixtures import annotated_couch_scene, five_object_scene
from scenebench.scene import derive_relations
from scenebench.scene.model import ObjectInstance, Region, Scene
from scenebench.wkm import Difference, InfoCondition, WorldKnowledge, ground

CASES: list[tuple[str, object]] = []


def case(name):
    def register(fn):
        CASES.append((name, fn))
        return fn

    return register


def _shelves_scene() -> Scene:
    """Two same-room cabinets; only cabinet/p carries a book on top.

    The cabinets are farther apart than the near threshold so the only
    difference lives at the "on" relation level.
    """

    def mk(iid, mn, mx, desc):
        center = tuple(round((a + b) / 2, 9) for a, b in zip(mn, mx))
        return ObjectInstance(
            instance_id=iid, category=iid.split("/")[0], scope="Furnitures",
            room="1/living room", position=center, min_points=mn, max_points=mx,
            description=tuple(desc),
        )

    objs = [
        mk("cabinet/p", (0.0, 0.0, 0.0), (1.0, 1.0, 1.0), ["The object is a brown cabinet."]),
        mk("book/x", (0.3, 0.3, 1.0), (0.6, 0.6, 1.05), ["The object is a red book."]),
        mk("cabinet/q", (4.0, 0.0, 0.0), (5.0, 1.0, 1.0), ["The object is a white cabinet."]),
    ]
    region = Region("1", "living room", ((0.0, 0.0), (6.0, 0.0), (6.0, 2.0), (0.0, 2.0)))
    scene = Scene("shelves", {o.instance_id: o for o in objs}, (region,), {})
    scene.validate()
    return scene


class Fixtures:
    def __init__(self):
        self.five = WorldKnowledge(derive_relations(five_object_scene()))
        self.five_book = WorldKnowledge(derive_relations(five_object_scene(with_book=True)))
        self.couch = WorldKnowledge(derive_relations(annotated_couch_scene()))
        self.shelves = WorldKnowledge(derive_relations(_shelves_scene()))


CHAIRS = {"chair/a", "chair/b", "chair/c"}


# -- find_diff: priority walk --------------------------------------------------

@case("find_diff: category level fires first")
def _(fx):
    assert fx.five.find_diff("chair/a", {"chair/a", "table/a"}) == \
        Difference("category", frozenset({"chair", "table"}))


@case("find_diff: room level when categories agree")
def _(fx):
    assert fx.five.find_diff("chair/c", CHAIRS) == \
        Difference("room", frozenset({"1/living room", "2/kitchen"}))


@case("find_diff: room has priority over relations")
def _(fx):
    assert fx.five.find_diff("chair/b", CHAIRS).diff_type == "room"


@case("find_diff: relation level, target has edge others lack")
def _(fx):
    assert fx.five.find_diff("chair/a", {"chair/a", "chair/b"}) == \
        Difference("relation", ("near", "table"))


@case("find_diff: anchor categories scanned in sorted order")
def _(fx):
    assert fx.five_book.find_diff("chair/a", {"chair/a", "chair/b"}) == \
        Difference("relation", ("near", "book"))


@case("find_diff: appearance fallback when no structured difference")
def _(fx):
    assert fx.five.find_diff("chair/b", {"chair/a", "chair/b"}) == Difference("appearance", None)


@case("find_diff: nothing-case when target lacks a relation type")
def _(fx):
    assert fx.shelves.find_diff("cabinet/q", {"cabinet/p", "cabinet/q"}) == \
        Difference("relation", ("on", "nothing"))


@case("find_diff: relation with anchor category when target has the type")
def _(fx):
    assert fx.shelves.find_diff("cabinet/p", {"cabinet/p", "cabinet/q"}) == \
        Difference("relation", ("on", "book"))


@case("find_diff: contract violations")
def _(fx):
    with pytest.raises(ContractViolation):
        fx.five.find_diff("chair/a", {"chair/b", "chair/c"})
    with pytest.raises(ContractViolation):
        fx.five.find_diff("chair/a", {"chair/a"})


# -- get_info: reading each level ----------------------------------------------

@case("get_info: room branch")
def _(fx):
    info = fx.five.session(0).get_info("chair/c", Difference("room", frozenset({"x", "y"})))
    assert info == InfoCondition(room="2/kitchen")


@case("get_info: category branch")
def _(fx):
    info = fx.five.session(0).get_info("chair/a", Difference("category", frozenset({"x", "y"})))
    assert info == InfoCondition(category="chair")


@case("get_info: relation branch, edge present")
def _(fx):
    info = fx.five.session(0).get_info("chair/a", Difference("relation", ("near", "table")))
    assert info == InfoCondition(relation=((True, "near", "table"),))


@case("get_info: relation branch, edge absent")
def _(fx):
    info = fx.five.session(0).get_info("chair/b", Difference("relation", ("near", "table")))
    assert info == InfoCondition(relation=((False, "near", "table"),))


@case("get_info: nothing-case on object having the relation type")
def _(fx):
    info = fx.shelves.session(0).get_info("cabinet/p", Difference("relation", ("on", "nothing")))
    assert info == InfoCondition(relation=((False, "on", "nothing"),))


@case("get_info: nothing-case on object lacking the relation type")
def _(fx):
    info = fx.shelves.session(0).get_info("cabinet/q", Difference("relation", ("on", "nothing")))
    assert info == InfoCondition(relation=((True, "on", "nothing"),))


@case("get_info: appearance samples without repetition, then exhausts")
def _(fx):
    session = fx.five.session(seed=3)
    diff = Difference("appearance", None)
    seen = set()
    for _ in range(3):  # chair/b has three caption sentences
        (attr,) = session.get_info("chair/b", diff).appearance
        assert attr not in seen
        seen.add(attr)
    with pytest.raises(GenerationFailure):
        session.get_info("chair/b", diff)


# -- filter: each branch of the condition logic ---------------------------------

@case("filter: room equality")
def _(fx):
    assert fx.five.filter(CHAIRS, InfoCondition(room="1/living room")) == {"chair/a", "chair/b"}


@case("filter: category identity")
def _(fx):
    assert fx.five.filter({"couch/a"}, InfoCondition(category="couch")) == {"couch/a"}


@case("filter: has-relation triple")
def _(fx):
    cond = InfoCondition(relation=((True, "near", "table"),))
    assert fx.five.filter({"chair/a", "chair/b"}, cond) == {"chair/a"}


@case("filter: has-not-relation triple")
def _(fx):
    cond = InfoCondition(relation=((False, "near", "table"),))
    assert fx.five.filter({"chair/a", "chair/b"}, cond) == {"chair/b"}


@case("filter: (True, rel, nothing) keeps objects without the relation type")
def _(fx):
    cond = InfoCondition(relation=((True, "on", "nothing"),))
    assert fx.shelves.filter({"cabinet/p", "cabinet/q"}, cond) == {"cabinet/q"}


@case("filter: (False, rel, nothing) keeps objects with the relation type")
def _(fx):
    cond = InfoCondition(relation=((False, "on", "nothing"),))
    assert fx.shelves.filter({"cabinet/p", "cabinet/q"}, cond) == {"cabinet/p"}


@case("filter: appearance similarity above 0.9")
def _(fx):
    cond = InfoCondition(appearance=("The cushion is blue.",))
    assert fx.five.filter(CHAIRS, cond) == {"chair/b"}


@case("filter: combined category and room condition")
def _(fx):
    cond = InfoCondition(category="chair", room="2/kitchen")
    assert fx.five.filter(CHAIRS | {"couch/a"}, cond) == {"chair/c"}


@case("filter: unknown candidates skipped")
def _(fx):
    cond = InfoCondition(category="chair")
    assert fx.five.filter({"chair/a", "ghost/1"}, cond) == {"chair/a"}


# -- grounding -------------------------------------------------------------------

@case("ground: unique chair near the table")
def _(fx):
    assert ground(fx.five, "the chair", "the table", "near") == "chair/a"


@case("ground: white couch near the window via annotated edge")
def _(fx):
    # the annotated couch lists the window as near; grounding goes the other way
    assert ground(fx.couch, "white couch", "the window", "near") == \
        "couch/SM_01_6D7YPDMTDD522XTVKQ888888"


@case("ground: missing anchor fails with anchor reason")
def _(fx):
    with pytest.raises(GroundingFailure) as err:
        ground(fx.five, "the chair", "the fridge", "near")
    assert err.value.reason == "anchor"


@case("ground: no neighbor under the relation fails with relation reason")
def _(fx):
    with pytest.raises(GroundingFailure) as err:
        ground(fx.shelves, "the book", "the white cabinet", "on")
    assert err.value.reason == "relation"


@case("ground: tie between matching targets is ambiguous")
def _(fx):
    with pytest.raises(GroundingFailure) as err:
        ground(fx.five, "the chair", "the couch", "near")
    assert err.value.reason == "ambiguous"
    assert set(err.value.ties) == {"chair/a", "chair/b"}


# -- similarity -------------------------------------------------------------------

@case("similarity: identical text scores one")
def _(fx):
    assert fx.five.similarity("a white couch", "a white couch") == pytest.approx(1.0)


@case("similarity: disjoint tokens score zero")
def _(fx):
    assert fx.five.similarity("red book", "green plant") == 0.0


@case("similarity: token order does not matter")
def _(fx):
    assert fx.five.similarity("white couch", "couch white") == pytest.approx(1.0)
