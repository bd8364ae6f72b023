import numpy as np
import pytest

from smoothrace.simulator import RenderParams, make_track


@pytest.fixture
def oval():
    return make_track("oval", 0.6)


@pytest.fixture
def s_curve():
    return make_track("s_curve", 0.6)


@pytest.fixture
def small_render():
    return RenderParams(width=32, height=24)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
