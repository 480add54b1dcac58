import numpy as np
import pytest

from entgeo.rng import SplitMix64


def random_hermitian(dim, seed):
    z = SplitMix64(seed).complex_normal((dim, dim))
    return 0.5 * (z + z.conj().T)


@pytest.fixture
def herm():
    return random_hermitian


def close(a, b, tol=1e-12):
    return np.max(np.abs(np.asarray(a) - np.asarray(b))) <= tol
