"""Full and restricted least squares on the assembled design.

The full fit uses a QR decomposition. The restricted fit zeroes one
predictor's coefficient block through the explicit constrained-estimator
formula b0 = b - (Z'Z)^{-1} A' (A (Z'Z)^{-1} A')^{-1} A b, where A is the
selector matrix picking that block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .design import DesignMatrix
from .errors import NumericalError

__all__ = [
    "FitResult",
    "RestrictedFit",
    "fit_ols",
    "fit_restricted",
    "projection_matrices",
    "projection_rss_identity_check",
    "noncentrality",
]


@dataclass(frozen=True, eq=False)
class FitResult:
    """Unrestricted least-squares fit.

    ``sigma2_tilde`` is the maximum-likelihood variance estimate RSS/n.
    """

    coefficients: np.ndarray
    rss: float
    sigma2_tilde: float
    fitted: np.ndarray
    n: int
    k: int
    block_offsets: tuple[int, ...]

    @property
    def intercept(self) -> float:
        return float(self.coefficients[0])

    def block(self, m: int) -> np.ndarray:
        """Coefficient block of predictor m (0-based)."""
        return self.coefficients[self.block_offsets[m] : self.block_offsets[m + 1]]


@dataclass(frozen=True, eq=False)
class RestrictedFit:
    """Least-squares fit with one predictor's block constrained to zero."""

    tested_index: int
    coefficients_0: np.ndarray
    rss0: float


def fit_ols(design: DesignMatrix, y: np.ndarray) -> FitResult:
    """Ordinary least squares via QR."""
    y = np.asarray(y, dtype=float)
    n, k = design.values.shape
    if y.shape != (n,):
        raise ValueError(f"response shape {y.shape} does not match design rows {n}")
    if n <= k:
        raise NumericalError(f"need n > k, got n={n}, k={k}")
    q, r = np.linalg.qr(design.values)
    diag = np.abs(np.diag(r))
    if diag.min() <= 1e-12 * max(diag.max(), 1.0):
        raise NumericalError("design matrix is rank deficient; cannot fit")
    coef = scipy.linalg.solve_triangular(r, q.T @ y)
    fitted = design.values @ coef
    resid = y - fitted
    rss = float(resid @ resid)
    return FitResult(
        coefficients=coef,
        rss=rss,
        sigma2_tilde=rss / n,
        fitted=fitted,
        n=n,
        k=k,
        block_offsets=design.block_offsets,
    )


def fit_restricted(
    design: DesignMatrix, y: np.ndarray, full: FitResult, r: int
) -> RestrictedFit:
    """Constrained fit with predictor r's coefficient block forced to zero."""
    if not 0 <= r < design.num_predictors:
        raise ValueError(f"predictor index {r} out of range 0..{design.num_predictors - 1}")
    y = np.asarray(y, dtype=float)
    z = design.values
    sl = design.block_slice(r)
    gram = z.T @ z
    # columns of (Z'Z)^{-1} selected by A', i.e. those of block r
    rhs = np.zeros((design.k, sl.stop - sl.start))
    rhs[sl] = np.eye(sl.stop - sl.start)
    try:
        ginv_cols = np.linalg.solve(gram, rhs)
        middle = ginv_cols[sl]
        correction = ginv_cols @ np.linalg.solve(middle, full.coefficients[sl])
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"singular constrained system while testing predictor {r}: {exc}"
        ) from exc
    coef0 = full.coefficients - correction
    coef0[sl] = 0.0
    resid0 = y - z @ coef0
    rss0 = float(resid0 @ resid0)
    return RestrictedFit(tested_index=r, coefficients_0=coef0, rss0=rss0)


def _column_basis(matrix: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(matrix)
    return q


def projection_matrices(design: DesignMatrix, r: int) -> tuple[np.ndarray, np.ndarray]:
    """Explicit projections onto the full and the restricted column spaces.

    O(n^2) memory; intended for validation on small instances only.
    """
    z = design.values
    sl = design.block_slice(r)
    keep = np.ones(design.k, dtype=bool)
    keep[sl] = False
    q_full = _column_basis(z)
    q_restr = _column_basis(z[:, keep])
    return q_full @ q_full.T, q_restr @ q_restr.T


def projection_rss_identity_check(
    design: DesignMatrix, y: np.ndarray, r: int
) -> tuple[float, float]:
    """(RSS0 - RSS, y'(P - P0)y) computed independently; test helper."""
    y = np.asarray(y, dtype=float)
    full = fit_ols(design, y)
    restricted = fit_restricted(design, y, full, r)
    p_full, p_restr = projection_matrices(design, r)
    quad = float(y @ ((p_full - p_restr) @ y))
    return restricted.rss0 - full.rss, quad


def noncentrality(
    design: DesignMatrix, b: np.ndarray, sigma2: float, r: int
) -> float:
    """Noncentrality b'Z'(P - P0)Zb / sigma2 for the test of predictor r.

    Computed as the squared residual of projecting Zb onto the restricted
    column space, which avoids forming the projection matrices.
    """
    if sigma2 <= 0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")
    z = design.values
    mu = z @ np.asarray(b, dtype=float)
    sl = design.block_slice(r)
    keep = np.ones(design.k, dtype=bool)
    keep[sl] = False
    z0 = z[:, keep]
    coef0, *_ = np.linalg.lstsq(z0, mu, rcond=None)
    resid = mu - z0 @ coef0
    return float(resid @ resid) / sigma2
