import numpy as np
import pytest

from ttolab.selftest import random_blaschke, random_trig_symbol, two_cos

TWO_PI = 2.0 * np.pi


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def boundary_grid(m):
    return TWO_PI * np.arange(m) / m


def random_unimodular(rng):
    return complex(np.exp(1j * rng.uniform(0.0, TWO_PI)))


__all__ = [
    "random_blaschke",
    "random_trig_symbol",
    "two_cos",
    "boundary_grid",
    "random_unimodular",
    "TWO_PI",
]
