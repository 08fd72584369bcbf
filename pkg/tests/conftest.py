import numpy as np
import pytest

from rs3b.system import Coupling


@pytest.fixture
def rng():
    return np.random.default_rng(20260824)


@pytest.fixture(params=[2, 3, 4], ids=lambda n: f"n{n}")
def coupling(request):
    n = request.param
    return Coupling(n, 0.9 * np.pi / (2 * n))


@pytest.fixture
def c3():
    return Coupling(3, 0.3)
