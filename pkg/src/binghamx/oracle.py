"""Independent ground-truth generators used to validate the series code.

Nothing here shares evaluation machinery with the series modules: the
Monte-Carlo integrators sample the sphere directly, the scalar
hypergeometric series uses its own term recurrence, and the
finite-difference gradient only calls the scalar function it is given.

Randomness is fully pinned: block b of a run draws from
PCG64(SeedSequence([seed, b])), Gaussians come from numpy's ziggurat
standard_normal, and blocks are reduced in index order, so identical
(seed, n, Sigma) yield bit-identical estimates on any machine.  The 50
blocks double as the jackknife resampling groups.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError, OrderRangeError, SamplingOverflowError

#: Number of sampling blocks; also the jackknife group count.
BLOCKS = 50


@dataclass(frozen=True)
class McEstimate:
    """A Monte-Carlo estimate with its standard error.

    ``value`` and ``std_error`` are floats for scalar targets and
    (d, d) arrays (entrywise standard errors) for matrix targets.
    """

    value: object
    std_error: object
    n_samples: int
    seed: int


def _check_sampling_args(n: int, seed: int) -> None:
    if n < 1000:
        raise OrderRangeError(f"need at least 1000 samples, got {n}")
    if seed < 0:
        raise OrderRangeError(f"seed must be a nonnegative integer, got {seed}")


def _block_sizes(n: int) -> list[int]:
    base, rem = divmod(n, BLOCKS)
    return [base + 1] * rem + [base] * (BLOCKS - rem)


def _sphere_block(d: int, size: int, seed: int, block: int) -> np.ndarray:
    """Uniform sphere samples: normalized rows of standard Gaussians."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, block])))
    z = rng.standard_normal((size, d))
    norms = np.sqrt(np.sum(z * z, axis=1))
    return z / norms[:, None]


def _weights(x: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    with np.errstate(over="raise"):
        try:
            w = np.exp(np.sum((x @ sigma) * x, axis=1))
        except FloatingPointError:
            raise SamplingOverflowError(
                "exp(x' Sigma x) overflowed float64; the matrix is far "
                "outside any usable regime"
            ) from None
    if not np.isfinite(w).all():
        raise SamplingOverflowError(
            "exp(x' Sigma x) produced non-finite weights; the matrix is far "
            "outside any usable regime"
        )
    return w


def mc_norm_const(sigma: np.ndarray, n: int, seed: int) -> McEstimate:
    """Sample mean of exp(x' Sigma x) over the uniform sphere.

    Returns the estimate of the normalizing constant and the standard
    error of the mean.
    """
    _check_sampling_args(n, seed)
    d = sigma.shape[0]
    total = 0.0
    total_sq = 0.0
    for b, size in enumerate(_block_sizes(n)):
        w = _weights(_sphere_block(d, size, seed, b), sigma)
        total += float(w.sum())
        total_sq += float((w * w).sum())
    mean = total / n
    var = max(total_sq - n * mean * mean, 0.0) / (n - 1)
    return McEstimate(
        value=mean, std_error=float(np.sqrt(var / n)), n_samples=n, seed=seed
    )


def mc_covariance(sigma: np.ndarray, n: int, seed: int) -> McEstimate:
    """Ratio estimator of Cov(X) = E[x x' w] / E[w], w = exp(x' Sigma x).

    Entrywise standard errors come from a delete-one-block jackknife
    over the 50 sampling blocks, which respects the ratio form of the
    estimator.  The estimate has unit trace up to float roundoff.
    """
    _check_sampling_args(n, seed)
    d = sigma.shape[0]
    nums = np.empty((BLOCKS, d, d))
    dens = np.empty(BLOCKS)
    for b, size in enumerate(_block_sizes(n)):
        x = _sphere_block(d, size, seed, b)
        w = _weights(x, sigma)
        nums[b] = x.T @ (x * w[:, None])
        dens[b] = float(w.sum())
    num_tot = nums.sum(axis=0)
    den_tot = float(dens.sum())
    value = num_tot / den_tot
    leave_out = (num_tot[None, :, :] - nums) / (den_tot - dens)[:, None, None]
    centered = leave_out - leave_out.mean(axis=0)
    se = np.sqrt((BLOCKS - 1) / BLOCKS * np.sum(centered * centered, axis=0))
    return McEstimate(value=value, std_error=se, n_samples=n, seed=seed)


def kummer_series(
    b: float, theta: float, rel_tol: float = 1e-16, max_terms: int = 500
) -> float:
    """The scalar series sum_k (1/2)_k / (b)_k * theta^k / k!.

    Terms follow the recurrence t_{k+1} = t_k (1/2 + k)/(b + k) *
    theta/(k + 1); summation stops when a term falls below ``rel_tol``
    relative to the running sum.
    """
    if not b > 0:
        raise OrderRangeError(f"b must be positive, got {b}")
    total = 1.0
    term = 1.0
    for k in range(max_terms):
        term *= (0.5 + k) / (b + k) * theta / (k + 1)
        if abs(term) <= rel_tol * abs(total):
            return total + term
        total += term
    raise ConvergenceError(
        f"scalar series did not converge within {max_terms} terms "
        f"(b = {b:g}, theta = {theta:g})"
    )


def kummer_partial_sum(b: float, theta: float, terms: int) -> float:
    """Sum of the first ``terms`` terms (orders 0..terms-1) of the series."""
    if not b > 0:
        raise OrderRangeError(f"b must be positive, got {b}")
    if terms < 1:
        raise OrderRangeError(f"terms must be >= 1, got {terms}")
    total = 1.0
    term = 1.0
    for k in range(terms - 1):
        term *= (0.5 + k) / (b + k) * theta / (k + 1)
        total += term
    return total


def fd_gradient(
    f: Callable[[np.ndarray], float], sigma: np.ndarray, h: float
) -> np.ndarray:
    """Central-difference gradient under the symmetric-matrix convention.

    Off-diagonal perturbations move sigma_ij and sigma_ji together and
    the difference quotient is halved, matching the operator
    (1 + delta_ij)/2 * d/dsigma_ij, so fd_gradient(tr, Sigma, h) = I.
    """
    if not h > 0:
        raise OrderRangeError(f"h must be positive, got {h}")
    d = sigma.shape[0]
    g = np.zeros((d, d))
    for i in range(d):
        for j in range(i, d):
            e = np.zeros((d, d))
            e[i, j] = e[j, i] = 1.0
            diff = (f(sigma + h * e) - f(sigma - h * e)) / (2.0 * h)
            g[i, j] = g[j, i] = diff if i == j else 0.5 * diff
    return g
