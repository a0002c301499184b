import numpy as np
import pytest

from chi_contract.prob import Channel, Distribution


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_channel(rng, k, m):
    raw = rng.gamma(1.0, 1.0, size=(m, k))
    return Channel(raw / raw.sum(axis=0, keepdims=True))


def random_distribution(rng, k, full_support=True):
    p = rng.dirichlet(np.full(k, 0.8))
    if full_support:
        p = 0.999 * p + 0.001 / k
    return Distribution(p)
