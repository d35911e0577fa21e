import numpy as np
import pytest

import builders


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def six():
    return builders.six_set()


@pytest.fixture
def gu4():
    return builders.gu4_set()


@pytest.fixture
def gu4_group():
    return builders.gu4_group()


@pytest.fixture
def pw():
    return builders.trine()
