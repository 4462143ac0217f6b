import numpy as np
import pytest

from infotree import EstimatorConfig


@pytest.fixture
def cfg():
    return EstimatorConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)
