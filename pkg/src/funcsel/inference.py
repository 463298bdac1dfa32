"""Likelihood-ratio tests per predictor and their chi-square reference.

The statistic for predictor r is (RSS0 - RSS) / sigma2_tilde with
sigma2_tilde = RSS/n from the full fit, referred to a central chi-square
with p_r degrees of freedom. The noncentral CDF (Poisson mixture of central
chi-square CDFs) is provided for validating the alternative-hypothesis
distribution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc, gammaincc, gammaln

from .design import DesignMatrix
from .linmodel import FitResult, fit_ols, fit_restricted

__all__ = [
    "HypothesisTest",
    "chisq_cdf",
    "noncentral_chisq_cdf",
    "test_predictor",
    "test_all",
]

# floor for reported p-values; avoids exact zeros in log-scale output
P_VALUE_FLOOR = 1e-300


@dataclass(frozen=True)
class HypothesisTest:
    """Result of testing one predictor's coefficient block against zero."""

    predictor_index: int
    statistic: float
    dof: int
    p_value: float


def chisq_cdf(x: float, dof: int) -> float:
    """CDF of the central chi-square distribution with ``dof`` degrees of freedom."""
    if dof < 1:
        raise ValueError(f"dof must be >= 1, got {dof}")
    if x < 0:
        raise ValueError(f"x must be nonnegative, got {x}")
    return float(gammainc(dof / 2.0, x / 2.0))


def _chisq_sf(x: float, dof: int) -> float:
    return float(gammaincc(dof / 2.0, x / 2.0))


def noncentral_chisq_cdf(x: float, dof: int, delta: float) -> float:
    """CDF of the noncentral chi-square with noncentrality ``delta``.

    Evaluates the Poisson-weighted series of central chi-square CDFs,
    truncated once the retained Poisson mass exceeds 1 - 1e-12.
    """
    if dof < 1:
        raise ValueError(f"dof must be >= 1, got {dof}")
    if x < 0:
        raise ValueError(f"x must be nonnegative, got {x}")
    if delta < 0:
        raise ValueError(f"delta must be nonnegative, got {delta}")
    if delta == 0.0:
        return chisq_cdf(x, dof)
    rate = delta / 2.0
    width = 10.0 * np.sqrt(rate) + 30.0
    j_lo = max(0, int(np.floor(rate - width)))
    j_hi = int(np.ceil(rate + width))
    while True:
        j = np.arange(j_lo, j_hi + 1)
        log_w = -rate + j * np.log(rate) - gammaln(j + 1)
        weights = np.exp(log_w)
        if weights.sum() >= 1.0 - 1e-12:
            break
        j_lo = max(0, j_lo - int(width))
        j_hi += int(width)
    terms = gammainc((dof + 2 * j) / 2.0, x / 2.0)
    return float(np.dot(weights, terms))


def test_predictor(
    design: DesignMatrix, y: np.ndarray, full: FitResult, r: int
) -> HypothesisTest:
    """Likelihood-ratio test of predictor r's block against zero."""
    restricted = fit_restricted(design, y, full, r)
    statistic = (restricted.rss0 - full.rss) / full.sigma2_tilde
    statistic = max(statistic, 0.0)  # guard roundoff on an inactive constraint
    dof = design.block_size(r)
    p_value = max(min(_chisq_sf(statistic, dof), 1.0), P_VALUE_FLOOR)
    return HypothesisTest(
        predictor_index=r, statistic=float(statistic), dof=dof, p_value=p_value
    )


def test_all(design: DesignMatrix, y: np.ndarray) -> list[HypothesisTest]:
    """Test every predictor against the single shared full fit."""
    full = fit_ols(design, y)
    return [
        test_predictor(design, y, full, r) for r in range(design.num_predictors)
    ]
