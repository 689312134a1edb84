"""Screening of model inputs with dependence measures (HSIC, distance covariance)."""

from .data import Dataset
from .errors import DepScreenError
from .indep_tests import (
    SCREEN_METHODS,
    dcov_quantile_test,
    hsic_gamma_test,
    permutation_test,
    screen,
    spectral_null_sample,
    spectral_test,
)
from .measures import (
    DependenceEstimate,
    borgonovo_delta,
    correlation_t_test,
    dcor2,
    dcov2,
    hsic,
    normalized_shares,
    pearson,
    spearman,
    sup_hsic,
)
from .outcomes import ScreeningReport, TestOutcome

__version__ = "0.1.0"

__all__ = [
    "SCREEN_METHODS",
    "Dataset",
    "DepScreenError",
    "DependenceEstimate",
    "ScreeningReport",
    "TestOutcome",
    "borgonovo_delta",
    "correlation_t_test",
    "dcor2",
    "dcov2",
    "dcov_quantile_test",
    "hsic",
    "hsic_gamma_test",
    "normalized_shares",
    "pearson",
    "permutation_test",
    "screen",
    "spearman",
    "spectral_null_sample",
    "spectral_test",
    "sup_hsic",
]
