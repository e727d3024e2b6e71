from importlib import resources

import pytest

from dihomo.geometry import build_state_space, load_boxes
from dihomo.pv import parse_program


def data(name: str) -> str:
    return resources.files("dihomo").joinpath("data", name).read_text()


@pytest.fixture
def mutex_program():
    return parse_program(data("central_mutex.pv"))


@pytest.fixture
def swiss_program():
    return parse_program(data("swiss_flag.pv"))


@pytest.fixture
def twophase_program():
    return parse_program(data("two_phase.pv"))


@pytest.fixture
def mutex(mutex_program):
    return build_state_space(mutex_program)


@pytest.fixture
def swiss(swiss_program):
    return build_state_space(swiss_program)


@pytest.fixture
def twophase(twophase_program):
    return build_state_space(twophase_program)


@pytest.fixture
def corridor():
    return load_boxes(data("corridor.boxes"))


@pytest.fixture
def two_holes():
    return load_boxes(data("two_holes.boxes"))
