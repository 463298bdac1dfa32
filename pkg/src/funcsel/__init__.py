"""Variable selection for scalar-on-function linear regression.

Workflow: smooth gridded curves onto B-spline bases, assemble the linear
design through the basis Gram matrices, test each predictor's coefficient
block with a likelihood-ratio statistic, and select predictors through
Bonferroni or step-up false-discovery-rate corrections.
"""

from .bspline import (
    BasisSpec,
    GramMatrix,
    evaluate_basis,
    evaluate_basis_matrix,
    gram_matrix,
    make_uniform_basis,
)
from .design import DesignMatrix, build_design
from .errors import (
    ConditionWarning,
    DataError,
    NumericalError,
    RankDeficiencyError,
    SampleSizeError,
)
from .inference import (
    HypothesisTest,
    chisq_cdf,
    noncentral_chisq_cdf,
    test_all,
    test_predictor,
)
from .linmodel import (
    FitResult,
    RestrictedFit,
    fit_ols,
    fit_restricted,
    noncentrality,
    projection_rss_identity_check,
)
from .selection import SelectionResult, default_q, select_bonferroni, select_fdr
from .simgen import (
    MonteCarloReport,
    SimScenario,
    SimTruth,
    generate_replication,
    run_monte_carlo,
)
from .smoothing import FunctionalDataset, RawCurve, build_dataset, smooth_curve

__version__ = "0.1.0"

__all__ = [
    "BasisSpec",
    "GramMatrix",
    "evaluate_basis",
    "evaluate_basis_matrix",
    "gram_matrix",
    "make_uniform_basis",
    "DesignMatrix",
    "build_design",
    "ConditionWarning",
    "DataError",
    "NumericalError",
    "RankDeficiencyError",
    "SampleSizeError",
    "HypothesisTest",
    "chisq_cdf",
    "noncentral_chisq_cdf",
    "test_all",
    "test_predictor",
    "FitResult",
    "RestrictedFit",
    "fit_ols",
    "fit_restricted",
    "noncentrality",
    "projection_rss_identity_check",
    "SelectionResult",
    "default_q",
    "select_bonferroni",
    "select_fdr",
    "MonteCarloReport",
    "SimScenario",
    "SimTruth",
    "generate_replication",
    "run_monte_carlo",
    "FunctionalDataset",
    "RawCurve",
    "build_dataset",
    "smooth_curve",
]
