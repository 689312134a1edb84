"""Non-negative regression of output local measures on input local measures."""

from .coef_test import bootstrap_coefficient_test, coefficient_screen
from .cv import CvSelection, cv_select, hsic_lasso_screen
from .design import LocalDesign, build_design, frobenius_objective, local_matrix, objective_expand, vectorize
from .lars import LarsPath, lars_positive_gram, lars_positive_path, path_kkt_violation
from .nnls import FitResult, kkt_violation, nnls_fit, nnls_gram

__all__ = [
    "CvSelection",
    "FitResult",
    "LarsPath",
    "LocalDesign",
    "bootstrap_coefficient_test",
    "build_design",
    "coefficient_screen",
    "cv_select",
    "frobenius_objective",
    "hsic_lasso_screen",
    "kkt_violation",
    "lars_positive_gram",
    "lars_positive_path",
    "local_matrix",
    "nnls_fit",
    "nnls_gram",
    "objective_expand",
    "path_kkt_violation",
    "vectorize",
]
