import numpy as np
import pytest

from specsense.rmt import default_table


@pytest.fixture(scope="session")
def tw_table():
    return default_table()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
