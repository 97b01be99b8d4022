"""Shared helpers for the test suite."""

import numpy as np
import pytest


def random_orthonormal(rng, d, r):
    """Random d x r frame with orthonormal columns."""
    q, rm = np.linalg.qr(rng.normal(size=(d, max(r, 1))))
    q = q[:, :r] * np.sign(np.diag(rm)[:r])
    return q


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
