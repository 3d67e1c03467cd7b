import numpy as np
import pytest
from hypothesis import settings

from aip.colligation import build_coefficient_matrix
from aip.problems import (BoundaryData, NpData, build_boundary, build_np, build_sarason,
                          sarason_from_np)

settings.register_profile("aip", deadline=None, max_examples=25, derandomize=True)
settings.load_profile("aip")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def np_pair():
    p = build_np(NpData([0, 0.5], [0.2, 0.5]))
    return p, build_coefficient_matrix(p)


@pytest.fixture(scope="session")
def boundary_unit():
    p = build_boundary(BoundaryData(1, 1, 1))
    return p, build_coefficient_matrix(p)


@pytest.fixture(scope="session")
def sarason_pair():
    p = build_sarason(sarason_from_np(NpData([0, 0.5], [0.2, 0.5])))
    return p, build_coefficient_matrix(p)
