"""Symmetric-matrix ingestion, power sums, and gradient polynomials.

Matrices are plain float64 numpy arrays.  :func:`load_matrix` is the only
ingestion point: it parses the text format, enforces symmetry to the
documented tolerance, and returns the exactly symmetrized matrix, so
everything downstream may assume a finite symmetric array with d >= 2.

The text format is whitespace-separated: the first token is the dimension
d, followed by d*d entries read row by row.  Line breaks are not
significant beyond separating tokens.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    InsufficientPowersError,
    MatrixFormatError,
    MatrixValidationError,
)

#: Relative asymmetry tolerated on ingestion: |a_ij - a_ji| / (1 + |a_ij|).
ASYMMETRY_TOL = 1e-9

#: Largest d for which the dense eigenvalue path is attempted.  Larger
#: matrices are supported only through the diagonal fast path.
DENSE_EIGEN_LIMIT = 20000


def load_matrix(text: str) -> np.ndarray:
    """Parse matrix text into a validated symmetric float64 array.

    Parameters
    ----------
    text : str
        First token the dimension d (integer >= 2), then d*d decimal
        reals in row-major order.

    Returns
    -------
    numpy.ndarray
        The exactly symmetrized matrix (A + A.T) / 2, shape (d, d).

    Raises
    ------
    MatrixFormatError
        Malformed header, non-numeric token, or wrong entry count; the
        message names the offending row and column.
    MatrixValidationError
        d < 2, non-finite entries, or relative asymmetry above
        ``ASYMMETRY_TOL``.
    """
    tokens = text.split()
    if not tokens:
        raise MatrixFormatError("empty input: expected dimension header")
    try:
        d = int(tokens[0])
    except ValueError:
        raise MatrixFormatError(
            f"dimension header must be an integer, got {tokens[0]!r}"
        ) from None
    if d < 2:
        raise MatrixValidationError(f"dimension must be >= 2, got {d}")
    body = tokens[1:]
    if len(body) != d * d:
        # Locate the shortfall/overrun for the diagnostic.
        n = min(len(body), d * d)
        row, col = divmod(n, d)
        raise MatrixFormatError(
            f"expected {d * d} entries for d = {d}, got {len(body)} "
            f"(at row {row + 1}, column {col + 1})"
        )
    entries = np.empty(d * d, dtype=np.float64)
    for idx, tok in enumerate(body):
        try:
            entries[idx] = float(tok)
        except ValueError:
            row, col = divmod(idx, d)
            raise MatrixFormatError(
                f"row {row + 1}, column {col + 1}: expected a number, got {tok!r}"
            ) from None
    a = entries.reshape(d, d)
    if not np.isfinite(a).all():
        i, j = np.argwhere(~np.isfinite(a))[0]
        raise MatrixValidationError(
            f"non-finite entry at row {i + 1}, column {j + 1}"
        )
    asym = np.abs(a - a.T) / (1.0 + np.abs(a))
    worst = float(asym.max())
    if worst > ASYMMETRY_TOL:
        i, j = np.unravel_index(int(np.argmax(asym)), asym.shape)
        raise MatrixValidationError(
            f"matrix is not symmetric: entries ({i + 1},{j + 1}) and "
            f"({j + 1},{i + 1}) differ, relative asymmetry {worst:.3e} "
            f"exceeds {ASYMMETRY_TOL:.0e}"
        )
    return symmetrize(a)


def format_matrix(a: np.ndarray) -> str:
    """Render a matrix in the same text format :func:`load_matrix` reads.

    Entries are written with 17 significant digits so a round trip is
    value-preserving.
    """
    d = a.shape[0]
    lines = [str(d)]
    for row in a:
        lines.append(" ".join(f"{x:.17g}" for x in row))
    return "\n".join(lines) + "\n"


def symmetrize(a: np.ndarray) -> np.ndarray:
    """Return (A + A.T) / 2 as a new array."""
    return (a + a.T) / 2.0


def frobenius_norm(a: np.ndarray) -> float:
    """Frobenius norm sqrt(sum of squared entries)."""
    return float(np.sqrt(np.sum(a * a)))


@dataclass(frozen=True)
class PowerSums:
    """Traces of matrix powers, the sufficient statistics of the series.

    ``p[j]`` holds tr(Sigma^j) for j = 0..K, so ``p[0]`` is the ambient
    dimension d and ``p[1]`` the trace.  Instances are treated as
    immutable after construction.
    """

    d: int
    p: np.ndarray = field(repr=False)

    @property
    def K(self) -> int:
        """Highest power available."""
        return len(self.p) - 1

    def require(self, k: int) -> None:
        """Raise unless powers up to order ``k`` are available."""
        if k > self.K:
            raise InsufficientPowersError(
                f"power sums available up to order {self.K}, need {k}"
            )


def power_sums(sigma: np.ndarray, K: int) -> PowerSums:
    """Compute tr(Sigma^j) for j = 1..K from the eigenvalues of Sigma.

    Diagonal matrices skip the eigenvalue decomposition and use their
    diagonal directly.  Dense matrices beyond ``DENSE_EIGEN_LIMIT`` are
    rejected; diagonal ones of any size are fine.

    Parameters
    ----------
    sigma : numpy.ndarray
        Symmetric (d, d) matrix, d >= 2.
    K : int
        Highest power required, K >= 1.

    Returns
    -------
    PowerSums
    """
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise MatrixValidationError(f"expected a square matrix, got shape {sigma.shape}")
    d = sigma.shape[0]
    if d < 2:
        raise MatrixValidationError(f"dimension must be >= 2, got {d}")
    if K < 1:
        raise InsufficientPowersError(f"K must be >= 1, got {K}")
    if not np.isfinite(sigma).all():
        raise MatrixValidationError("matrix has non-finite entries")
    diag = np.diagonal(sigma)
    if np.count_nonzero(sigma - np.diag(diag)) == 0:
        eig = diag.astype(np.float64, copy=True)
    else:
        if d > DENSE_EIGEN_LIMIT:
            raise MatrixValidationError(
                f"dense matrices are limited to d <= {DENSE_EIGEN_LIMIT} "
                f"(got d = {d}); only diagonal input is supported beyond that"
            )
        try:
            eig = np.linalg.eigvalsh(sigma)
        except np.linalg.LinAlgError as exc:
            raise MatrixValidationError(f"eigenvalue decomposition failed: {exc}") from exc
    p = np.empty(K + 1, dtype=np.float64)
    p[0] = float(d)
    pw = eig.copy()
    for j in range(1, K + 1):
        p[j] = pw.sum()
        if j < K:
            pw *= eig
    return PowerSums(d=d, p=p)


@dataclass(frozen=True)
class GradientPolynomial:
    """A matrix polynomial c_0 I + c_1 Sigma + ... + c_L Sigma^L.

    This is the closed form every gradient in the package takes: the
    gradient of a symmetric function of power sums is a polynomial in
    Sigma whose coefficients depend only on the power sums.
    """

    d: int
    coeffs: np.ndarray

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def materialize(g: GradientPolynomial, sigma: np.ndarray) -> np.ndarray:
    """Evaluate a :class:`GradientPolynomial` at Sigma by Horner's rule.

    The result is symmetrized to remove accumulation asymmetry from the
    repeated products.
    """
    if sigma.shape[0] != g.d:
        raise DimensionMismatchError(
            f"polynomial is for d = {g.d}, matrix has d = {sigma.shape[0]}"
        )
    c = g.coeffs
    eye = np.eye(g.d)
    out = c[-1] * eye
    for l in range(len(c) - 2, -1, -1):
        out = out @ sigma + c[l] * eye
    return symmetrize(out)
