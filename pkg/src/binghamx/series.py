"""Truncated expansions of the normalizing constant of the Bingham family.

For a symmetric d x d matrix Sigma, the normalizing constant of the
density proportional to exp(x' Sigma x) on the unit sphere is the
hypergeometric series

    N(Sigma) = sum_{k>=0} (1/2)_k / (d/2)_k * C_k(Sigma) / k!,

with C_k the order-k zonal polynomial.  This module evaluates the m-term
truncations of N, of 1/N (drop the tail and the quadratic-and-higher
powers of the first-order remainder), and of the gradient of N, plus the
covariance approximation

    Cov(X) ~ [truncated 1/N at order l] * [truncated grad N at order m],

whose error is O(d^-alpha) with alpha = (2 - r)/2 for m = 2 and
(3 - 2r)/2 for m >= 3 under a growth regime with exponent r.  No
explicit constant is known for that covariance remainder; callers get
the symbolic alpha descriptor, and optionally a conservative numeric
bound assembled from the proved inequalities (clearly labeled derived).

Series terms are computed as (Pochhammer ratio) * (C_k / k!), with k!
folded into the zonal weights while still rational: the separate factors
overflow near the maximum order while each combined term is moderate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import (
    GrowthRegime,
    gradient_tail_bound,
    inverse_tail_bound,
    norm_const_tail_bound,
)
from .errors import DimensionMismatchError, OrderRangeError
from .partitions import MAX_ORDER
from .symmat import (
    GradientPolynomial,
    PowerSums,
    frobenius_norm,
    materialize,
)
from .zonal import power_table, scaled_zonal_gradient, scaled_zonal_value


def pochhammer_ratio(k: int, d: float) -> float:
    """(1/2)_k / (d/2)_k as a product of factor ratios.

    Stable for every supported k and d: each factor lies in (0, 1] for
    d >= 1, so no intermediate value overflows.
    """
    if k < 0:
        raise OrderRangeError(f"k must be >= 0, got {k}")
    if not d > 0:
        raise OrderRangeError(f"d must be positive, got {d}")
    out = 1.0
    for i in range(k):
        out *= (0.5 + i) / (d / 2.0 + i)
    return out


def _check_dims(ps: PowerSums, d: int, order: int, low: int, name: str) -> None:
    if ps.d != d:
        raise DimensionMismatchError(
            f"power sums are for d = {ps.d}, call asked for d = {d}"
        )
    if not low <= order <= MAX_ORDER:
        raise OrderRangeError(f"{name} must be in {low}..{MAX_ORDER}, got {order}")
    if order > 1:
        ps.require(order - 1)


def norm_const_truncated(ps: PowerSums, m: int, d: int) -> float:
    """Sum of the first m series terms (orders 0..m-1)."""
    _check_dims(ps, d, m, 1, "m")
    table = power_table(ps.p, m - 1) if m > 1 else None
    total = 1.0
    for k in range(1, m):
        total += pochhammer_ratio(k, d) * scaled_zonal_value(k, table)
    return total


def inverse_norm_const_truncated(ps: PowerSums, l: int, d: int) -> float:
    """Truncated inverse: 1 - sum of series terms of orders 1..l-1."""
    _check_dims(ps, d, l, 2, "l")
    table = power_table(ps.p, l - 1)
    total = 1.0
    for j in range(1, l):
        total -= pochhammer_ratio(j, d) * scaled_zonal_value(j, table)
    return total


def norm_const_gradient_truncated(ps: PowerSums, m: int, d: int) -> GradientPolynomial:
    """Gradient of the m-term truncation, as a polynomial of degree m - 2.

    For m = 2 this is the constant polynomial I/d; for m = 3 it is
    (1/d + tr(Sigma)/(d(d+2))) I + (2/(d(d+2))) Sigma.
    """
    _check_dims(ps, d, m, 2, "m")
    table = power_table(ps.p, m - 1)
    coeffs = np.zeros(m - 1)
    for k in range(1, m):
        c = scaled_zonal_gradient(k, table, ps.p)
        coeffs[: k] += pochhammer_ratio(k, d) * c
    return GradientPolynomial(d=ps.d, coeffs=coeffs)


def covariance_expansion(
    ps: PowerSums, sigma: np.ndarray, l: int, m: int, d: int
) -> np.ndarray:
    """Covariance approximation: truncated inverse times truncated gradient."""
    if sigma.shape[0] != d:
        raise DimensionMismatchError(
            f"matrix has dimension {sigma.shape[0]}, call asked for d = {d}"
        )
    scalar = inverse_norm_const_truncated(ps, l, d)
    grad = norm_const_gradient_truncated(ps, m, d)
    return scalar * materialize(grad, sigma)


def covariance_second_order(sigma: np.ndarray, d: int) -> np.ndarray:
    """The (l, m) = (2, 3) covariance product in closed form.

    (1 - tr(Sigma)/d) * [ I/d + ((tr Sigma) I + 2 Sigma) / (d (d + 2)) ],
    which for trace-zero Sigma reduces to I/d + 2 Sigma / (d (d + 2)).
    """
    if sigma.shape[0] != d:
        raise DimensionMismatchError(
            f"matrix has dimension {sigma.shape[0]}, call asked for d = {d}"
        )
    t = float(np.trace(sigma))
    base = np.eye(d) / d + (t * np.eye(d) + 2.0 * sigma) / (d * (d + 2.0))
    return (1.0 - t / d) * base


def alpha_exponent(m: int, regime: GrowthRegime) -> float:
    """Order of the covariance remainder: O(d^-alpha)."""
    if m < 2:
        raise OrderRangeError(f"m must be >= 2, got {m}")
    r = regime.exponent
    return (2.0 - r) / 2.0 if m == 2 else (3.0 - 2.0 * r) / 2.0


def alpha_descriptor(m: int, regime: GrowthRegime | None) -> str:
    """Human-readable remainder order for the covariance product."""
    if m < 2:
        raise OrderRangeError(f"m must be >= 2, got {m}")
    rule = "alpha = (2 - r)/2" if m == 2 else "alpha = (3 - 2r)/2"
    if regime is None:
        return f"remainder O(d^-alpha), {rule} in the growth exponent r"
    a = alpha_exponent(m, regime)
    return f"remainder O(d^-{a:g}), {rule} at r = {regime.exponent:g}"


def covariance_derived_bound(
    ps: PowerSums,
    sigma: np.ndarray,
    l: int,
    m: int,
    d: int,
    regime: GrowthRegime,
) -> float:
    """Conservative numeric bound on the covariance truncation error.

    Assembled from the proved pieces: with T the truncated inverse, G
    the materialized truncated gradient, B_g the gradient tail bound and
    B_i the inverse tail bound,

        ||Cov - T G||_F <= |T| B_g + B_i (||G||_F + B_g).

    Derived, not sharp; requires d above the inverse-expansion
    threshold.  The tight statement remains the alpha descriptor.
    """
    scalar = inverse_norm_const_truncated(ps, l, d)
    grad = materialize(norm_const_gradient_truncated(ps, m, d), sigma)
    b_grad = gradient_tail_bound(m, d, regime)
    b_inv = inverse_tail_bound(l, d, regime)
    return abs(scalar) * b_grad + b_inv * (frobenius_norm(grad) + b_grad)


@dataclass(frozen=True)
class BoundedValue:
    """A truncated value packaged with its certified bound.

    ``bound`` is a nonnegative float for the value and gradient
    expansions, and a symbolic descriptor string for the covariance
    product (whose remainder has a proved order but no explicit
    constant).
    """

    value: object
    bound: object
    m: int
    d: int
    regime: GrowthRegime | None
    l: int | None = None


def norm_const_with_bound(
    ps: PowerSums, m: int, d: int, regime: GrowthRegime
) -> BoundedValue:
    """Truncated normalizing constant plus its tail bound."""
    return BoundedValue(
        value=norm_const_truncated(ps, m, d),
        bound=norm_const_tail_bound(m, float(d), regime),
        m=m,
        d=d,
        regime=regime,
    )


def gradient_with_bound(
    ps: PowerSums, m: int, d: int, regime: GrowthRegime
) -> BoundedValue:
    """Truncated gradient polynomial plus its Frobenius tail bound."""
    return BoundedValue(
        value=norm_const_gradient_truncated(ps, m, d),
        bound=gradient_tail_bound(m, float(d), regime),
        m=m,
        d=d,
        regime=regime,
    )


def covariance_with_descriptor(
    ps: PowerSums,
    sigma: np.ndarray,
    l: int,
    m: int,
    d: int,
    regime: GrowthRegime | None = None,
) -> BoundedValue:
    """Covariance product plus the symbolic order of its remainder."""
    return BoundedValue(
        value=covariance_expansion(ps, sigma, l, m, d),
        bound=alpha_descriptor(m, regime),
        m=m,
        d=d,
        regime=regime,
        l=l,
    )
