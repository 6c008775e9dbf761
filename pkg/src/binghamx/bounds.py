"""Certified tail bounds, admissibility thresholds, and order selection.

All bounds hold under a growth regime ||Sigma||_F <= scale * d^(exp/2)
with 0 <= exp < 1.  Writing g1 = (1 + sqrt(3))/2, g2 = scale * g1 and
g3 = 2^(3/2) e^(1/2) / g1, the truncation remainders of the series for
the normalizing constant and its gradient satisfy, for admissible d,

    |R_m|      <= g3 * g2^m / sqrt((m+1)!) * d^(-m (1 - exp) / 2),
    ||grad R_m|| <= sqrt(2e) * g2^(m-1) / sqrt((m-1)!)
                    * d^(-(1 + (m-1)(1 - exp)) / 2),

the first for m >= 1 and d >= (2 g2^2)^(1/(1-exp)), the second for
m >= 2.  The inverse normalizing constant adds a geometric-series term
and needs the stricter threshold (6 g2^2)^(1/(1-exp)).

Dividing the two bounds gives B_value / B_gradient =
2 * scale * d^(exp/2) / sqrt(m (m + 1)), so the value bound is the
smaller one exactly when 4 * scale^2 * d^exp <= m (m + 1); that
algebraic criterion is what :func:`compare_bounds` evaluates, and it is
tested to agree with direct comparison of the two bound values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

import numpy as np

from .errors import (
    InadmissibleDimensionError,
    OrderRangeError,
    OrderSelectionError,
)
from .partitions import MAX_ORDER
from .symmat import frobenius_norm


@dataclass(frozen=True)
class GrowthRegime:
    """Norm growth assumption ||Sigma||_F <= scale * d^(exponent/2).

    ``scale`` is the --gamma0 CLI flag, ``exponent`` the --r flag.
    """

    scale: float = 1.0
    exponent: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise OrderRangeError(f"regime scale must be positive, got {self.scale}")
        if not (0.0 <= self.exponent < 1.0):
            raise OrderRangeError(
                f"regime exponent must lie in [0, 1), got {self.exponent}"
            )

    def cap(self, d: float) -> float:
        """The norm cap scale * d^(exponent/2)."""
        return self.scale * d ** (self.exponent / 2.0)


@dataclass(frozen=True)
class BoundConstants:
    """The three constants appearing in the tail bounds.

    base_growth = (1 + sqrt(3)) / 2 is the growth rate of
    sqrt(d)-Pochhammer ratios, scaled_growth = scale * base_growth, and
    tail_prefactor = 2^(3/2) e^(1/2) / base_growth multiplies the value
    bound.
    """

    base_growth: float
    scaled_growth: float
    tail_prefactor: float


BASE_GROWTH = (1.0 + math.sqrt(3.0)) / 2.0


def bound_constants(regime: GrowthRegime) -> BoundConstants:
    """Constants of the tail bounds for a regime."""
    return BoundConstants(
        base_growth=BASE_GROWTH,
        scaled_growth=regime.scale * BASE_GROWTH,
        tail_prefactor=2.0**1.5 * math.exp(0.5) / BASE_GROWTH,
    )


def admissible_dimension(regime: GrowthRegime) -> float:
    """Smallest d at which the value tail bound holds: (2 g2^2)^(1/(1-exp))."""
    g2 = regime.scale * BASE_GROWTH
    return (2.0 * g2 * g2) ** (1.0 / (1.0 - regime.exponent))


def admissible_dimension_inverse(regime: GrowthRegime) -> float:
    """Dimension above which the inverse expansion holds: (6 g2^2)^(1/(1-exp)).

    At this threshold the geometric-series ratio of the inverse bound
    equals 2 e^(1/2) / (g1 sqrt(6)) ~ 0.9855 < 1, so the bound is finite
    for every d strictly above it.
    """
    g2 = regime.scale * BASE_GROWTH
    return (6.0 * g2 * g2) ** (1.0 / (1.0 - regime.exponent))


def _require_admissible(d: float, threshold: float, what: str, strict: bool) -> None:
    ok = d > threshold if strict else d >= threshold
    if not ok:
        rel = ">" if strict else ">="
        raise InadmissibleDimensionError(
            f"d = {d:g} is below the admissible dimension for {what}: "
            f"need d {rel} {threshold:.6f}",
            threshold=threshold,
        )


def norm_const_tail_bound(m: int, d: float, regime: GrowthRegime) -> float:
    """Certified bound on the series remainder after m terms.

    Valid for m >= 1 and d >= admissible_dimension(regime); raises
    InadmissibleDimensionError otherwise.
    """
    if not 1 <= m <= MAX_ORDER:
        raise OrderRangeError(f"m must be in 1..{MAX_ORDER}, got {m}")
    _require_admissible(d, admissible_dimension(regime), "the value tail bound", False)
    c = bound_constants(regime)
    return (
        c.tail_prefactor
        * c.scaled_growth**m
        / math.sqrt(float(math.factorial(m + 1)))
        * d ** (-m * (1.0 - regime.exponent) / 2.0)
    )


def gradient_tail_bound(m: int, d: float, regime: GrowthRegime) -> float:
    """Certified Frobenius-norm bound on the gradient series remainder.

    Valid for m >= 2 and d >= admissible_dimension(regime).
    """
    if not 2 <= m <= MAX_ORDER:
        raise OrderRangeError(f"m must be in 2..{MAX_ORDER}, got {m}")
    _require_admissible(d, admissible_dimension(regime), "the gradient tail bound", False)
    c = bound_constants(regime)
    return (
        math.sqrt(2.0 * math.e)
        * c.scaled_growth ** (m - 1)
        / math.sqrt(float(math.factorial(m - 1)))
        * d ** (-(1.0 + (m - 1) * (1.0 - regime.exponent)) / 2.0)
    )


def first_order_inverse_ratio(d: float, regime: GrowthRegime) -> float:
    """The ratio b1 = 2 e^(1/2) g2 / g1 * d^(-(1-exp)/2) of the inverse bound.

    b1 < 1 exactly when d is above admissible_dimension_inverse(regime).
    """
    c = bound_constants(regime)
    return (
        2.0
        * math.exp(0.5)
        / c.base_growth
        * c.scaled_growth
        * d ** (-(1.0 - regime.exponent) / 2.0)
    )


def inverse_tail_bound(l: int, d: float, regime: GrowthRegime) -> float:
    """Bound on the error of the truncated inverse normalizing constant.

    The inverse expansion drops the remainder after l terms and the
    quadratic-and-higher powers of the first-order remainder, so the
    bound is norm_const_tail_bound(l) + b1^2 / (1 - b1).  Requires
    d strictly above admissible_dimension_inverse(regime).
    """
    if not 2 <= l <= MAX_ORDER:
        raise OrderRangeError(f"l must be in 2..{MAX_ORDER}, got {l}")
    _require_admissible(
        d, admissible_dimension_inverse(regime), "the inverse expansion", True
    )
    b1 = first_order_inverse_ratio(d, regime)
    return norm_const_tail_bound(l, d, regime) + b1 * b1 / (1.0 - b1)


def regime_check(sigma: np.ndarray, regime: GrowthRegime, d: int) -> bool:
    """Whether ||Sigma||_F <= scale * d^(exponent/2)."""
    if sigma.shape[0] != d:
        raise OrderRangeError(
            f"matrix has dimension {sigma.shape[0]}, regime check asked for d = {d}"
        )
    return frobenius_norm(sigma) <= regime.cap(d)


def compare_bounds(m: int, d: float, regime: GrowthRegime) -> str:
    """Which tail bound is smaller at (m, d): 'norm_const', 'gradient' or 'tie'.

    Uses the exact algebraic criterion 4 scale^2 d^exp vs m (m + 1)
    obtained by dividing the two bound formulas (see module docstring).
    """
    if not 2 <= m <= MAX_ORDER:
        raise OrderRangeError(f"m must be in 2..{MAX_ORDER}, got {m}")
    lhs = 4.0 * regime.scale * regime.scale * d**regime.exponent
    rhs = float(m * (m + 1))
    if lhs < rhs:
        return "norm_const"
    if lhs > rhs:
        return "gradient"
    return "tie"


def select_order(regime: GrowthRegime, d: float, eps: float) -> int:
    """Smallest m >= 2 with max of both tail bounds <= eps.

    Searches m = 2..MAX_ORDER; raises OrderSelectionError carrying the
    best achievable bound when even MAX_ORDER misses eps.
    """
    if not (math.isfinite(eps) and eps > 0):
        raise OrderRangeError(f"eps must be positive, got {eps}")
    _require_admissible(d, admissible_dimension(regime), "order selection", False)
    best = math.inf
    best_m = 2
    for m in range(2, MAX_ORDER + 1):
        worst = max(
            norm_const_tail_bound(m, d, regime), gradient_tail_bound(m, d, regime)
        )
        if worst <= eps:
            return m
        if worst < best:
            best, best_m = worst, m
    raise OrderSelectionError(
        f"no order up to {MAX_ORDER} reaches eps = {eps:g}; "
        f"best achievable bound is {best:.6e} at m = {best_m}",
        best_bound=best,
        best_order=best_m,
    )


@dataclass(frozen=True)
class TailBoundTable:
    """Both bound families tabulated over a (d, m) grid."""

    regime: GrowthRegime
    d_values: tuple[float, ...]
    m_values: tuple[int, ...]
    norm_const_bounds: np.ndarray  # shape (len(d_values), len(m_values))
    gradient_bounds: np.ndarray


def tail_bound_table(
    regime: GrowthRegime, d_values: Sequence[float], m_values: Sequence[int]
) -> TailBoundTable:
    """Evaluate both tail bounds on the full (d, m) grid."""
    ds = tuple(float(d) for d in d_values)
    ms = tuple(int(m) for m in m_values)
    if not ds or not ms:
        raise OrderRangeError("d and m grids must be non-empty")
    nb = np.empty((len(ds), len(ms)))
    gb = np.empty((len(ds), len(ms)))
    for a, d in enumerate(ds):
        for b, m in enumerate(ms):
            nb[a, b] = norm_const_tail_bound(m, d, regime)
            gb[a, b] = gradient_tail_bound(m, d, regime)
    return TailBoundTable(
        regime=regime,
        d_values=ds,
        m_values=ms,
        norm_const_bounds=nb,
        gradient_bounds=gb,
    )


def round_half_up(x: float, places: int = 5) -> str:
    """Decimal string with ``places`` digits, ties rounded away from zero."""
    q = Decimal(1).scaleb(-places)
    return str(Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_UP))


def _grid(table: TailBoundTable, kind: str) -> np.ndarray:
    if kind == "norm_const":
        return table.norm_const_bounds
    if kind == "gradient":
        return table.gradient_bounds
    raise OrderRangeError(f"kind must be 'norm_const' or 'gradient', got {kind!r}")


def table_to_csv(table: TailBoundTable, kind: str) -> str:
    """One bound family as CSV: header then one row per d, full precision."""
    grid = _grid(table, kind)
    lines = ["d," + ",".join(f"m={m}" for m in table.m_values)]
    for a, d in enumerate(table.d_values):
        cells = [f"{v:.17g}" for v in grid[a]]
        lines.append(f"{d:g}," + ",".join(cells))
    return "\n".join(lines) + "\n"


def table_to_markdown(table: TailBoundTable) -> str:
    """Both bound families as Markdown tables, 5 decimals, half-up."""
    titles = (
        ("norm_const", "(a) normalizing-constant tail bound"),
        ("gradient", "(b) gradient tail bound"),
    )
    blocks = []
    header = "| d | " + " | ".join(f"m = {m}" for m in table.m_values) + " |"
    rule = "|---" * (len(table.m_values) + 1) + "|"
    for kind, title in titles:
        grid = _grid(table, kind)
        lines = [title, "", header, rule]
        for a, d in enumerate(table.d_values):
            cells = [round_half_up(v) for v in grid[a]]
            lines.append(f"| {d:g} | " + " | ".join(cells) + " |")
        blocks.append("\n".join(lines))
    return ("\n\n".join(blocks)) + "\n"


def write_csv_tables(table: TailBoundTable, norm_path, grad_path) -> None:
    """Write the two bound families to two CSV files."""
    with open(norm_path, "w", encoding="utf-8") as fh:
        fh.write(table_to_csv(table, "norm_const"))
    with open(grad_path, "w", encoding="utf-8") as fh:
        fh.write(table_to_csv(table, "gradient"))
