from functools import lru_cache

import pytest

from supermodular.modular_data import psu2_hat_data, su2_modular_data


@lru_cache(maxsize=None)
def su2(m: int):
    return su2_modular_data(m)


@lru_cache(maxsize=None)
def psu2(m: int):
    return psu2_hat_data(m)


@pytest.fixture(scope="session")
def su2_data():
    return su2


@pytest.fixture(scope="session")
def psu2_data():
    return psu2
