"""Built-in demo scenes.

Three deterministic scenes back the test-suite and the CLI demos: a small
five-object scene for knowledge-interface traces, an annotation-faithful couch
scene exercising loaded nearby_objects edges, and a three-room house large
enough to generate full benchmark episodes.
"""

from __future__ import annotations

from .scene.model import ObjectInstance, Region, Scene

Vec3 = tuple[float, float, float]


def _obj(
    instance_id: str,
    room: str,
    min_points: Vec3,
    max_points: Vec3,
    description: list[str],
    scope: str = "Furnitures",
    interactive: bool = False,
) -> ObjectInstance:
    center = tuple(round((a + b) / 2, 9) for a, b in zip(min_points, max_points))
    return ObjectInstance(
        instance_id=instance_id,
        category=instance_id.split("/", 1)[0],
        scope=scope,
        room=room,
        position=center,  # type: ignore[arg-type]
        min_points=min_points,
        max_points=max_points,
        description=tuple(description),
        interactive=interactive,
    )


def five_object_scene(with_book: bool = False) -> Scene:
    """Two rooms, three chairs, a table, a couch; optionally a book on the table.

    chair/a is the only chair near the table; chair/c is the only kitchen
    chair; chair/b differs from chair/a by appearance only.
    """
    living = "1/living room"
    kitchen = "2/kitchen"
    objects = [
        _obj("table/a", living, (1.0, 1.0, 0.0), (2.0, 2.0, 0.75), [
            "The object is a brown table.",
            "It has a rectangular top.",
            "The surface is flat.",
        ]),
        _obj("chair/a", living, (2.2, 1.2, 0.0), (2.7, 1.7, 0.9), [
            "The object is a white chair.",
            "It has a square seat.",
            "The legs are made of wood.",
        ]),
        _obj("chair/b", living, (4.6, 4.6, 0.0), (5.1, 5.1, 0.9), [
            "The object is a white chair.",
            "It has a round seat.",
            "The cushion is blue.",
        ]),
        _obj("chair/c", kitchen, (8.0, 1.0, 0.0), (8.5, 1.5, 0.9), [
            "The object is a black chair.",
            "It has a tall backrest.",
            "The frame is made of metal.",
        ]),
        _obj("couch/a", living, (0.5, 4.0, 0.0), (2.5, 5.0, 0.8), [
            "The object is a white L-shaped couch.",
            "It has orange cushions.",
            "The couch has a rectangular base.",
        ]),
    ]
    if with_book:
        objects.append(
            _obj("book/a", living, (1.3, 1.3, 0.75), (1.6, 1.6, 0.8), [
                "The object is a red book.",
                "It has a rectangular cover.",
            ], interactive=True)
        )
    regions = (
        Region("1", "living room", ((0.0, 0.0), (6.0, 0.0), (6.0, 6.0), (0.0, 6.0))),
        Region("2", "kitchen", ((6.0, 0.0), (12.0, 0.0), (12.0, 6.0), (6.0, 6.0))),
    )
    scene = Scene(
        scene_id="fiveobj" + ("_book" if with_book else ""),
        objects={o.instance_id: o for o in objects},
        regions=regions,
        annotated_edges={},
    )
    scene.validate()
    return scene


def annotated_couch_scene() -> Scene:
    """A couch record carrying verbatim nearby_objects annotations.

    The couch AABB and its nine caption sentences follow the annotation
    convention; neighbor records are minimal stubs so every edge endpoint
    exists. Annotated edges must survive derivation verbatim.
    """
    living = "1/living room"
    couch_id = "couch/SM_01_6D7YPDMTDD522XTVKQ888888"
    window_id = "window/SM_05_628FFE90"
    objects = [
        _obj(couch_id, living, (1.256558941, 0.0956145, 0.0), (2.760481854, 2.942481666, 0.817788782), [
            "The object is a white L-shaped couch.",
            "It has orange cushions.",
            "The couch has a rectangular base.",
            "There is a chaise lounge on one end.",
            "A backrest extends along the length of the couch.",
            "The couch has visible seams.",
            "It is made of a textured fabric.",
            "The cushions are square.",
            "The cushions have a smooth texture.",
        ]),
        _obj(window_id, living, (2.95, 0.5, 0.8), (3.05, 2.5, 2.2), [
            "The object is a window with a silver frame.",
        ], scope="Structure"),
        _obj("blanket/SM_04", living, (1.5, 0.3, 0.0), (2.2, 1.0, 0.03), [
            "The object is a gray blanket.",
        ]),
        _obj("teatable/SM_01", living, (1.6, 3.2, 0.0), (2.4, 3.8, 0.45), [
            "The object is a black teatable with a round top.",
        ]),
        _obj("picture/SM_01", living, (1.5, 2.9, 1.0), (2.5, 3.0, 1.8), [
            "The object is a picture in a golden frame.",
        ]),
    ]
    annotated = {
        couch_id: {
            window_id: ("near", 0.533305058),
            "blanket/SM_04": ("under", 0.028226491),
            "picture/SM_01": ("above", 0.187000558),
            "teatable/SM_01": ("near", 0.232296274),
        }
    }
    regions = (
        Region("1", "living room", ((0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (0.0, 4.0))),
    )
    scene = Scene(
        scene_id="couchroom",
        objects={o.instance_id: o for o in objects},
        regions=regions,
        annotated_edges=annotated,
    )
    scene.validate()
    return scene


def house_scene() -> Scene:
    """Three-room, 16 x 12 m house for benchmark generation and simulation.

    Walls carry scope "Structure" and are excluded from target sampling.
    Category counts (chairs x4, tables x3, stools x2, cabinets x2) support
    multi-round disambiguation; receptacle pairs within 1.5 m support the
    two-condition placement patterns.
    """
    lr, kt, br = "1/living room", "2/kitchen", "3/bedroom"
    W = "Structure"
    # two doors in the vertical divider (into kitchen and bedroom) plus one
    # between kitchen and bedroom; door aprons are kept clear of furniture so
    # the passable corridors stay wide for the discrete action space
    walls = [
        _obj("wall/n", lr, (0.0, 11.8, 0.0), (16.0, 12.0, 2.5), ["The object is a white wall."], scope=W),
        _obj("wall/s", lr, (0.0, 0.0, 0.0), (16.0, 0.2, 2.5), ["The object is a white wall."], scope=W),
        _obj("wall/w", lr, (0.0, 0.0, 0.0), (0.2, 12.0, 2.5), ["The object is a white wall."], scope=W),
        _obj("wall/e", kt, (15.8, 0.0, 0.0), (16.0, 12.0, 2.5), ["The object is a white wall."], scope=W),
        _obj("wall/d1", lr, (7.9, 0.2, 0.0), (8.1, 2.4, 2.5), ["The object is a white wall."], scope=W),
        _obj("wall/d2", lr, (7.9, 4.8, 0.0), (8.1, 8.0, 2.5), ["The object is a white wall."], scope=W),
        _obj("wall/d5", lr, (7.9, 10.4, 0.0), (8.1, 11.8, 2.5), ["The object is a white wall."], scope=W),
        _obj("wall/d3", kt, (8.1, 5.9, 0.0), (10.8, 6.1, 2.5), ["The object is a white wall."], scope=W),
        _obj("wall/d4", kt, (13.2, 5.9, 0.0), (15.8, 6.1, 2.5), ["The object is a white wall."], scope=W),
    ]
    furniture = [
        # living room
        _obj("table/lr1", lr, (1.0, 1.0, 0.0), (2.2, 2.2, 0.75), [
            "The object is a brown table.",
            "It has a rectangular top.",
            "The surface is flat.",
        ]),
        _obj("chair/lr1", lr, (2.4, 1.0, 0.0), (2.9, 1.5, 0.9), [
            "The object is a white chair.",
            "It has a square seat.",
            "The legs are made of wood.",
        ]),
        _obj("chair/lr2", lr, (0.5, 6.0, 0.0), (1.0, 6.5, 0.9), [
            "The object is a white chair.",
            "It has a round seat.",
            "The cushion is blue.",
        ]),
        _obj("couch/lr1", lr, (0.4, 8.5, 0.0), (2.4, 9.5, 0.8), [
            "The object is a white L-shaped couch.",
            "It has orange cushions.",
            "The couch has a rectangular base.",
        ]),
        _obj("teatable/lr1", lr, (1.0, 9.8, 0.0), (1.8, 10.4, 0.45), [
            "The object is a black teatable.",
            "It has a round top.",
        ]),
        _obj("book/lr1", lr, (1.1, 9.9, 0.45), (1.4, 10.2, 0.5), [
            "The object is a red book.",
            "It has a rectangular cover.",
        ], interactive=True),
        _obj("cabinet/lr1", lr, (6.5, 0.4, 0.0), (7.7, 1.0, 1.9), [
            "The object is a tall brown cabinet.",
            "It has two doors.",
        ], interactive=True),
        _obj("plant/lr1", lr, (4.5, 10.8, 0.0), (5.1, 11.4, 1.2), [
            "The object is a green plant.",
            "It grows in a round pot.",
        ]),
        _obj("mat/lr1", lr, (4.0, 4.0, 0.0), (5.0, 5.0, 0.05), [
            "The object is a gray mat.",
            "It is flat.",
        ]),
        # kitchen
        _obj("table/k1", kt, (10.0, 1.0, 0.0), (11.2, 2.2, 0.75), [
            "The object is a black table.",
            "It has a round top.",
        ]),
        _obj("chair/k1", kt, (11.4, 1.0, 0.0), (11.9, 1.5, 0.9), [
            "The object is a black chair.",
            "It has a tall backrest.",
            "The frame is made of metal.",
        ]),
        _obj("stool/k1", kt, (11.5, 2.2, 0.0), (12.0, 2.7, 0.5), [
            "The object is a red stool.",
            "It has a round seat.",
        ]),
        _obj("cup/k1", kt, (10.1, 1.1, 0.75), (10.3, 1.3, 0.85), [
            "The object is a white cup.",
            "It has a cylindrical shape.",
        ], interactive=True),
        _obj("cabinet/k1", kt, (14.8, 0.4, 0.0), (15.6, 1.6, 1.9), [
            "The object is a white cabinet.",
            "It has glass doors.",
        ], interactive=True),
        # bedroom
        _obj("bed/b1", br, (12.5, 9.0, 0.0), (15.4, 11.4, 0.6), [
            "The object is a blue bed.",
            "It has a rectangular frame.",
        ]),
        _obj("table/b1", br, (8.5, 10.2, 0.0), (9.7, 11.4, 0.75), [
            "The object is a white table.",
            "It has a flat top.",
        ]),
        _obj("chair/b1", br, (9.9, 10.5, 0.0), (10.4, 11.0, 0.9), [
            "The object is a brown chair.",
            "It has a curved backrest.",
        ]),
        _obj("bottle/b1", br, (8.6, 10.3, 0.75), (8.8, 10.5, 0.95), [
            "The object is a green bottle.",
            "It has a cylindrical shape.",
        ], interactive=True),
        _obj("stool/b2", br, (14.6, 8.4, 0.0), (15.1, 8.9, 0.5), [
            "The object is a black stool.",
            "It has a square seat.",
        ]),
    ]
    regions = (
        Region("1", "living room", ((0.2, 0.2), (8.1, 0.2), (8.1, 11.8), (0.2, 11.8))),
        Region("2", "kitchen", ((8.1, 0.2), (15.8, 0.2), (15.8, 6.1), (8.1, 6.1))),
        Region("3", "bedroom", ((8.1, 6.1), (15.8, 6.1), (15.8, 11.8), (8.1, 11.8))),
    )
    scene = Scene(
        scene_id="house",
        objects={o.instance_id: o for o in walls + furniture},
        regions=regions,
        annotated_edges={},
    )
    scene.validate()
    return scene


BUILTIN_SCENES = {
    "fiveobj": five_object_scene,
    "couchroom": annotated_couch_scene,
    "house": house_scene,
}
