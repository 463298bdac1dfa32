"""Exception and warning types shared across the package."""


class DataError(Exception):
    """Malformed, inconsistent, or incomplete input data."""


class NumericalError(Exception):
    """Numerical failure: rank deficiency, singular system, or similar."""


class RankDeficiencyError(NumericalError):
    """A matrix that must have full column rank does not."""


class SampleSizeError(NumericalError):
    """The sample size does not exceed the number of model parameters."""


class ConditionWarning(UserWarning):
    """The parameter count k = 1 + sum(p_m) exceeds sqrt(n)/log(n).

    The fit is still computed when the design has full numerical rank, but
    the consistency regime for the selection procedure is not guaranteed.
    """
