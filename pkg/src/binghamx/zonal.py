"""Single-row zonal polynomials, their gradients, and tail coefficients.

The order-k zonal polynomial of a symmetric matrix depends only on the
power sums p_j = tr(Sigma^j):

    C_k(Sigma) = (k! / (1/2)_k) * sum over partitions (i_1..i_k) of k
                 of  prod_j p_j^i_j / (i_j! (2j)^i_j).

Everything here is evaluated from cached per-order partition data: an
integer exponent matrix plus the partition weights divided by (1/2)_k,
kept as exact rationals and converted to float64 once.  The scaled
quantities C_k/k! and grad C_k/k! are what the series layer consumes;
keeping k! out of the floating-point path means no intermediate factor
overflows even at the largest supported order.

The tail coefficients bound |C_k|: |C_k(Sigma)| <= (k!/(1/2)_k) *
bound_coefficient(k, d) * ||Sigma||^k for any d x d symmetric Sigma.
They are available in two forms proved equal (a sum over partitions
weighted by d^(i_1/2), and a single binomial-type sum), both polynomials
in sqrt(d) with rational coefficients.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import OrderRangeError
from .partitions import (
    MAX_ORDER,
    enumerate_partitions,
    half_pochhammer,
    partition_weight,
)
from .symmat import GradientPolynomial, PowerSums


@lru_cache(maxsize=None)
def _partition_data(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Exponent matrix E (n_partitions, k) and weights w/(1/2)_k as float64."""
    parts = enumerate_partitions(k)
    E = np.array([pm.i for pm in parts], dtype=np.int64)
    hp = half_pochhammer(k)
    q = np.array([float(partition_weight(pm) / hp) for pm in parts])
    return E, q


def power_table(p: np.ndarray, kmax: int) -> np.ndarray:
    """Table of p_j^e for j = 1..kmax, e = 0..kmax // j.

    ``p`` follows the :class:`~binghamx.symmat.PowerSums` convention
    (p[j] = tr(Sigma^j)).  Entry [j-1, e] holds p_j^e; exponents beyond
    kmax // j never occur in any partition of k <= kmax and are left at 1.
    """
    table = np.ones((kmax, kmax + 1))
    for j in range(1, kmax + 1):
        base = float(p[j])
        for e in range(1, kmax // j + 1):
            table[j - 1, e] = table[j - 1, e - 1] * base
    return table


def scaled_zonal_value(k: int, table: np.ndarray) -> float:
    """C_k / k! evaluated from a :func:`power_table`."""
    if k == 0:
        return 1.0
    E, q = _partition_data(k)
    W = table[np.arange(k)[None, :], E]
    return float(q @ W.prod(axis=1))


def scaled_zonal_gradient(k: int, table: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Coefficients of grad C_k / k! as a polynomial in Sigma.

    Returns the length-k array c with grad(C_k)/k! = sum_l c[l] Sigma^l.
    The derivative of p_j^i_j needs p_j^(i_j - 1); when p_j = 0 and
    i_j = 1 that factor is 1 by convention, handled on a separate branch
    because the fast path divides the cached row product by p_j.
    """
    E, q = _partition_data(k)
    W = table[np.arange(k)[None, :], E]
    row = W.prod(axis=1)
    c = np.zeros(k)
    for l in range(1, k + 1):
        el = E[:, l - 1]
        pl = float(p[l])
        if pl != 0.0:
            mask = el > 0
            if mask.any():
                c[l - 1] = l * float((q[mask] * el[mask]) @ row[mask]) / pl
        else:
            mask = el == 1
            if mask.any():
                sub = W[mask].copy()
                sub[:, l - 1] = 1.0
                c[l - 1] = l * float(q[mask] @ sub.prod(axis=1))
    return c


def _check_order(k: int, low: int) -> None:
    if not low <= k <= MAX_ORDER:
        raise OrderRangeError(f"k must be in {low}..{MAX_ORDER}, got {k}")


def zonal_value(k: int, ps: PowerSums) -> float:
    """The order-k zonal polynomial C_k(Sigma) from power sums.

    C_0 = 1, C_1 = tr(Sigma), C_2 = ((tr Sigma)^2 + 2 tr(Sigma^2)) / 3.
    """
    _check_order(k, 0)
    if k == 0:
        return 1.0
    ps.require(k)
    table = power_table(ps.p, k)
    return float(math.factorial(k)) * scaled_zonal_value(k, table)


def zonal_gradient(k: int, ps: PowerSums) -> GradientPolynomial:
    """Gradient of C_k as a :class:`GradientPolynomial` of degree k - 1.

    The gradient convention is G_ab = (1 + delta_ab)/2 * d/dsigma_ab, so
    grad C_1 = I and grad C_2 = (2/3)((tr Sigma) I + 2 Sigma).
    """
    _check_order(k, 1)
    ps.require(k)
    table = power_table(ps.p, k)
    coeffs = float(math.factorial(k)) * scaled_zonal_gradient(k, table, ps.p)
    return GradientPolynomial(d=ps.d, coeffs=coeffs)


def zonal_value_exact(k: int, powers: Sequence) -> Fraction:
    """C_k as an exact Fraction from exact power sums.

    ``powers`` uses the same indexing as :class:`PowerSums`:
    powers[j] = tr(Sigma^j) for j = 1..k (index 0 is ignored), entries
    Fraction or int.  Brute-force partition sum, no floating point.
    """
    _check_order(k, 0)
    if k == 0:
        return Fraction(1)
    total = Fraction(0)
    for pm in enumerate_partitions(k):
        prod = Fraction(1)
        for j, ij in enumerate(pm.i, start=1):
            if ij:
                prod *= Fraction(powers[j]) ** ij
        total += partition_weight(pm) * prod
    return Fraction(math.factorial(k)) / half_pochhammer(k) * total


def bound_coefficient_poly(k: int) -> tuple[Fraction, ...]:
    """Multisum tail coefficient as a polynomial in s = sqrt(d).

    Coefficient t collects the weights of all partitions with i_1 = t:
    sum over partitions of d^(i_1 / 2) * weight = sum_t c[t] s^t.
    """
    _check_order(k, 0)
    coeffs = [Fraction(0)] * (k + 1)
    if k == 0:
        return (Fraction(1),)
    for pm in enumerate_partitions(k):
        coeffs[pm.i[0]] += partition_weight(pm)
    return tuple(coeffs)


def bound_coefficient_closed_poly(k: int) -> tuple[Fraction, ...]:
    """Closed-form tail coefficient as a polynomial in s = sqrt(d).

    Expands sum_{l=0}^{k} ((s - 1)/2)^l / l! * (1/2)_{k-l} / (k-l)!
    binomially in s.  Equal, coefficient by coefficient, to
    :func:`bound_coefficient_poly`.
    """
    _check_order(k, 0)
    coeffs = [Fraction(0)] * (k + 1)
    for l in range(k + 1):
        tail = half_pochhammer(k - l) / math.factorial(k - l)
        scale = Fraction(1, 2**l * math.factorial(l))
        for t in range(l + 1):
            coeffs[t] += scale * math.comb(l, t) * (-1) ** (l - t) * tail
    return tuple(coeffs)


def _eval_sqrt_poly(coeffs: Sequence[Fraction], d: float) -> float:
    s = math.sqrt(d)
    out = 0.0
    for c in reversed(coeffs):
        out = out * s + float(c)
    return out


def bound_coefficient(k: int, d: float) -> float:
    """Multisum form of the tail coefficient at dimension d."""
    return _eval_sqrt_poly(bound_coefficient_poly(k), d)


def bound_coefficient_closed(k: int, d: float) -> float:
    """Closed single-sum form of the tail coefficient at dimension d."""
    return _eval_sqrt_poly(bound_coefficient_closed_poly(k), d)
