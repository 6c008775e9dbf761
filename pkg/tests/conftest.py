"""Shared helpers for the test suite: random matrix generators."""

from __future__ import annotations

import numpy as np


def random_symmetric(rng: np.random.Generator, d: int, norm: float | None = None) -> np.ndarray:
    """Symmetrized standard-normal matrix, optionally rescaled in Frobenius norm."""
    a = rng.standard_normal((d, d))
    s = (a + a.T) / 2.0
    if norm is not None:
        s *= norm / np.sqrt(np.sum(s * s))
    return s


def random_trace_zero(rng: np.random.Generator, d: int, norm: float) -> np.ndarray:
    """Random symmetric matrix projected to trace zero, Frobenius norm ``norm``."""
    s = random_symmetric(rng, d)
    s -= (np.trace(s) / d) * np.eye(d)
    s *= norm / np.sqrt(np.sum(s * s))
    return s


def haar_orthogonal(rng: np.random.Generator, d: int) -> np.ndarray:
    """Orthogonal matrix from the QR factorization of a Gaussian matrix.

    The sign fix makes the distribution Haar (uniform over the group).
    """
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))
