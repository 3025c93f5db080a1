import numpy as np
import pytest

import floquet_cat as fc


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: spec acceptance criteria")
    config.addinivalue_line("markers", "slow: multi-second physics runs")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def set1_small():
    """Paper set 1 at test-sized truncations."""
    return fc.paper_set_1(n_cavity=4, n_magnon=6)


@pytest.fixture
def set1():
    return fc.paper_set_1()


def random_complex(rng, n, m=None, scale=1.0):
    m = n if m is None else m
    return scale * (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m)))
