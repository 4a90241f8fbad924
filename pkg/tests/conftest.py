import numpy as np
import pytest

from lwocp.data import LiftedSequence


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def make_sequence(rng, m=12, p=3, d=1):
    X = rng.normal(size=(m, p))
    Y = X[:, :d] + 0.1 * rng.normal(size=(m, d))
    return LiftedSequence.from_arrays(X, Y)


@pytest.fixture
def small_seq(rng):
    return make_sequence(rng)
