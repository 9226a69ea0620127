import pytest

from scenebench.config import ToolkitConfig
from scenebench.fixtures import annotated_couch_scene, five_object_scene, house_scene
from scenebench.scene import derive_relations
from scenebench.wkm import WorldKnowledge


@pytest.fixture(scope="session")
def five_scene():
    return five_object_scene()


@pytest.fixture(scope="session")
def five_scene_book():
    return five_object_scene(with_book=True)


@pytest.fixture(scope="session")
def couch_scene():
    return annotated_couch_scene()


@pytest.fixture(scope="session")
def house():
    return house_scene()


@pytest.fixture(scope="session")
def five_graph(five_scene):
    return derive_relations(five_scene)


@pytest.fixture(scope="session")
def five_wkm(five_graph):
    return WorldKnowledge(five_graph)


@pytest.fixture(scope="session")
def house_graph(house):
    return derive_relations(house)


@pytest.fixture(scope="session")
def house_wkm(house_graph):
    return WorldKnowledge(house_graph)


@pytest.fixture(scope="session")
def config():
    return ToolkitConfig()
