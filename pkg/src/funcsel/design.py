"""Assembly of the regression design matrix from smoothed coefficients.

Row i of the design is (1, W_i1' J_1, ..., W_iM' J_M): the intercept followed
by one block per predictor, each block being the coefficient vector multiplied
by that predictor's basis Gram matrix.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bspline import GramMatrix
from .errors import ConditionWarning, RankDeficiencyError
from .smoothing import FunctionalDataset

__all__ = ["DesignMatrix", "build_design"]

_RANK_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """n x k design with an intercept column and one block per predictor.

    ``block_offsets`` has M+1 entries: the start column of each predictor
    block, and finally k. Column 0 is the intercept.
    """

    values: np.ndarray
    block_offsets: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def k(self) -> int:
        return self.values.shape[1]

    @property
    def num_predictors(self) -> int:
        return len(self.block_offsets) - 1

    def block_slice(self, m: int) -> slice:
        """Column slice of predictor m's coefficient block (0-based)."""
        return slice(self.block_offsets[m], self.block_offsets[m + 1])

    def block_size(self, m: int) -> int:
        return self.block_offsets[m + 1] - self.block_offsets[m]


def build_design(data: FunctionalDataset, grams: Sequence[GramMatrix]) -> DesignMatrix:
    """Build the design matrix and verify its numerical rank.

    Emits :class:`ConditionWarning` when k exceeds sqrt(n)/log(n); raises
    :class:`RankDeficiencyError` when the relative smallest singular value
    falls below 1e-10.
    """
    grams = tuple(grams)
    if len(grams) != data.num_predictors:
        raise ValueError(
            f"got {len(grams)} Gram matrices for {data.num_predictors} predictors"
        )
    for m, gram in enumerate(grams):
        if gram.basis != data.bases[m]:
            raise ValueError(f"Gram matrix {m} was not built from the dataset's basis {m}")
    n = data.n
    blocks = [np.ones((n, 1))]
    offsets = [1]
    for m, gram in enumerate(grams):
        blocks.append(data.coefs[m] @ gram.values)
        offsets.append(offsets[-1] + gram.values.shape[0])
    values = np.hstack(blocks)
    k = values.shape[1]
    sv = np.linalg.svd(values, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] / sv[0] < _RANK_RTOL:
        raise RankDeficiencyError(
            f"design matrix is numerically rank deficient: smallest/largest singular "
            f"value {sv[-1] / sv[0] if sv[0] else 0.0:.3e} < {_RANK_RTOL:.0e}"
        )
    if k > math.sqrt(n) / math.log(n):
        warnings.warn(
            f"parameter count k = 1 + sum(p_m) = {k} exceeds sqrt(n)/log(n) = "
            f"{math.sqrt(n) / math.log(n):.2f}; the selection consistency regime "
            "is not guaranteed",
            ConditionWarning,
            stacklevel=2,
        )
    values.setflags(write=False)
    return DesignMatrix(values=values, block_offsets=tuple(offsets))
