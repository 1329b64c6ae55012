import numpy as np
import pytest

from qspectral.quaternion import Quaternion

I = Quaternion(0, 1, 0, 0)
J = Quaternion(0, 0, 1, 0)
K = Quaternion(0, 0, 0, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def qclose(p, q, tol=1e-12):
    return abs(p - q) <= tol
