import numpy as np
import pytest


def gen(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


@pytest.fixture
def rng() -> np.random.Generator:
    return gen(20260809)
