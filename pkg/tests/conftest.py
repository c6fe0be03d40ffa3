import numpy as np
import pytest


@pytest.fixture
def ex1():
    """Rank-one pair with R(A) = R(B) = span(e1)."""
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    b = np.array([[1.0, 1.0], [0.0, 0.0]])
    return a, b


@pytest.fixture
def ex2():
    """3x3 pair with R(A) = span(e1) strictly inside R(B) = span(e1, e2)."""
    a = np.zeros((3, 3))
    a[0, 2] = 1.0
    b = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
    return a, b


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

