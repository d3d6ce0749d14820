import numpy as np
import pytest

from liptree import build_truncation


@pytest.fixture(scope="session")
def t28():
    return build_truncation(2, 8)


@pytest.fixture(scope="session")
def t23():
    return build_truncation(2, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)

