import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from metriclie import catalog
from metriclie.core import LieAlgebra, MetricLieAlgebra

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def so3():
    return catalog.so3_constants()


def heisenberg_constants():
    return LieAlgebra.from_brackets(3, {(0, 1): {2: 1.0}}).structure_constants


def sl2_hef():
    """``[H,E] = 2E``, ``[H,F] = -2F``, ``[E,F] = H`` in the basis ``(H, E, F)``."""
    return LieAlgebra.from_brackets(3, {(0, 1): {1: 2.0}, (0, 2): {2: -2.0}, (1, 2): {0: 1.0}}).structure_constants


def gn(*alphas):
    return catalog.make_named("Gn", {"alphas": list(alphas)}).algebra


def metric(c, G=None):
    return MetricLieAlgebra.build(c, G)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
