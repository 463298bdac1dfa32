"""Least-squares smoothing of gridded curves onto a B-spline basis.

Each raw curve (grid, values) is converted into a coefficient vector by
ordinary least squares against the basis evaluated at the grid points. A
dataset bundles the per-sample, per-predictor coefficient vectors together
with the scalar responses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bspline import BasisSpec, evaluate_basis_matrix
from .errors import DataError, RankDeficiencyError, SampleSizeError

__all__ = ["RawCurve", "FunctionalDataset", "smooth_curve", "build_dataset"]


@dataclass(frozen=True, eq=False)
class RawCurve:
    """One observed curve: strictly increasing grid and matching values."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or values.ndim != 1:
            raise DataError("grid and values must be one-dimensional")
        if grid.size != values.size:
            raise DataError(
                f"grid length {grid.size} != values length {values.size}"
            )
        if grid.size and np.any(np.diff(grid) <= 0):
            raise DataError("grid must be strictly increasing (no duplicate points)")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True, eq=False)
class FunctionalDataset:
    """Smoothed predictors plus responses.

    ``coefs[m]`` is an (n, p_m) array of basis coefficients for predictor m;
    block sizes p_m may differ across predictors.
    """

    bases: tuple[BasisSpec, ...]
    coefs: tuple[np.ndarray, ...]
    responses: np.ndarray

    @property
    def n(self) -> int:
        return self.responses.size

    @property
    def num_predictors(self) -> int:
        return len(self.bases)


# Cache of pseudoinverses keyed by (spec, grid bytes); smoothing many curves
# observed on a shared grid then reduces to one matrix product per curve.
_PINV_CACHE: dict[tuple, tuple[np.ndarray, np.ndarray]] = {}
_PINV_CACHE_MAX = 128


def _basis_pinv(spec: BasisSpec, grid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    key = (spec, grid.tobytes())
    hit = _PINV_CACHE.get(key)
    if hit is not None:
        return hit
    basis = evaluate_basis_matrix(spec, grid)
    sv = np.linalg.svd(basis, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] / sv[0] < 1e-10:
        raise RankDeficiencyError(
            "basis matrix at the grid points is rank deficient; "
            + _describe_empty_spans(spec, grid)
        )
    pinv = np.linalg.pinv(basis)
    if len(_PINV_CACHE) >= _PINV_CACHE_MAX:
        _PINV_CACHE.pop(next(iter(_PINV_CACHE)))
    _PINV_CACHE[key] = (basis, pinv)
    return basis, pinv


def _describe_empty_spans(spec: BasisSpec, grid: np.ndarray) -> str:
    bp = spec.breakpoints
    empty = []
    for a, b in zip(bp[:-1], bp[1:]):
        if not np.any((grid >= a) & (grid < b)) and not (b == bp[-1] and np.any(grid == b)):
            empty.append((a, b))
    if empty:
        spans = ", ".join(f"[{a:g}, {b:g})" for a, b in empty)
        return f"knot span(s) without grid points: {spans}"
    return "no single knot span is empty; grid points are too few or degenerate"


def smooth_curve(curve: RawCurve, spec: BasisSpec) -> np.ndarray:
    """Least-squares basis coefficients for one curve."""
    if curve.grid.size < spec.num_basis:
        raise DataError(
            f"grid has {curve.grid.size} points; need at least num_basis = {spec.num_basis}"
        )
    if curve.grid[0] < spec.domain_lo or curve.grid[-1] > spec.domain_hi:
        raise DataError(
            f"grid range [{curve.grid[0]}, {curve.grid[-1]}] exceeds basis domain "
            f"[{spec.domain_lo}, {spec.domain_hi}]"
        )
    _, pinv = _basis_pinv(spec, curve.grid)
    return pinv @ curve.values


def build_dataset(
    curves: Sequence[Sequence[RawCurve]],
    responses: np.ndarray,
    bases: Sequence[BasisSpec],
) -> FunctionalDataset:
    """Smooth every curve and assemble a dataset.

    ``curves[i][m]`` is sample i's observation of predictor m. Raises
    :class:`SampleSizeError` when n does not exceed the total parameter
    count k = 1 + sum(p_m).
    """
    responses = np.asarray(responses, dtype=float)
    n = len(curves)
    if responses.ndim != 1 or responses.size != n:
        raise DataError(
            f"responses length {responses.size} does not match sample count {n}"
        )
    bases = tuple(bases)
    num_pred = len(bases)
    for i, row in enumerate(curves):
        if len(row) != num_pred:
            raise DataError(
                f"sample {i} has {len(row)} curves; expected {num_pred} predictors"
            )
    k = 1 + sum(spec.num_basis for spec in bases)
    if n <= k:
        raise SampleSizeError(
            f"need n > k = 1 + sum(p_m): got n={n}, k={k}"
        )
    coefs = []
    for m, spec in enumerate(bases):
        block = np.empty((n, spec.num_basis))
        for i in range(n):
            try:
                block[i] = smooth_curve(curves[i][m], spec)
            except (DataError, RankDeficiencyError) as exc:
                raise type(exc)(f"sample {i}, predictor {m}: {exc}") from exc
        coefs.append(block)
    return FunctionalDataset(bases=bases, coefs=tuple(coefs), responses=responses)
