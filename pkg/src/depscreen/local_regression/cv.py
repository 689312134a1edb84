"""Cross-validated choice of the positive-lasso penalty.

Folds split observations. Each training fold builds its own design; the
held-out error uses the local matrices of the held-out observations only
(pairs with both indices in the fold), so no pair shares an index with the
training data. Designs of different sizes ``m`` are put on a common scale by
dividing the normal equations by ``m^2``, which makes one lambda grid usable
across folds and for the final full-sample fit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..data import Dataset
from ..errors import EmptyGrid, InsufficientSample
from ..outcomes import ScreeningReport, TestOutcome
from .design import LocalDesign, _canonical, build_design, local_matrix, vectorize
from .lars import LarsPath, lars_positive_gram

CvMode = Literal["standard", "modified"]
SIGMA_WEIGHT = 0.5
DEFAULT_FOLDS = 5
DEFAULT_LAMBDAS = 100
LAMBDA_RANGE = 1e-4


@dataclass(frozen=True)
class CvSelection:
    lambda_hat: float
    mode: str
    lambdas: np.ndarray  # decreasing grid
    mu: np.ndarray  # mean held-out error per lambda
    sigma: np.ndarray  # fold standard deviation per lambda
    index: int
    beta: np.ndarray | None = None  # full-sample coefficients at lambda_hat

    @property
    def selected(self) -> tuple[int, ...]:
        if self.beta is None:
            return ()
        return tuple(int(k) for k in np.flatnonzero(self.beta > 0))


def normalized_path(design: LocalDesign) -> LarsPath:
    """Positive lasso path of the design divided by ``n^2``."""
    Q, c, _ = design.gram_form()
    m2 = float(design.n) ** 2
    return lars_positive_gram(Q / m2, c / m2)


def lambda_grid(lam_max: float, size: int = DEFAULT_LAMBDAS, ratio: float = LAMBDA_RANGE) -> np.ndarray:
    """``size`` log-spaced values from ``lam_max`` down to ``ratio * lam_max``."""
    if size < 1 or not lam_max > 0.0:
        raise EmptyGrid(f"cannot build a lambda grid from lambda_max={lam_max} with {size} points")
    return np.geomspace(lam_max, lam_max * ratio, size)


def fold_assignment(n: int, folds: int, rng) -> list[np.ndarray]:
    """Random partition of ``range(n)`` into ``folds`` near-equal sorted blocks."""
    perm = np.random.default_rng(rng).permutation(n)
    return [np.sort(block) for block in np.array_split(perm, folds)]


def _held_out_block(test: Dataset, kind: str, bandwidths):
    """Vectorized local matrices of the held-out observations, scaled by ``1/m``."""
    if kind == "hsic":
        bx, by = bandwidths
        resp = local_matrix(test.output, kind, by)
        preds = [local_matrix(x, kind, b) for x, b in zip(test.inputs, bx)]
    else:
        resp = local_matrix(test.output, kind)
        preds = [local_matrix(x, kind) for x in test.inputs]
    m = float(test.n)
    return vectorize(resp) / m, np.column_stack([vectorize(p) for p in preds]) / m


def fold_errors(dataset: Dataset, kind: str, blocks, lambdas: np.ndarray) -> np.ndarray:
    """``(folds, len(lambdas))`` held-out errors ``||D_Y - sum b_k D_k||^2 / m^2``."""
    errs = np.empty((len(blocks), lambdas.size))
    all_rows = np.arange(dataset.n)
    for f, test_rows in enumerate(blocks):
        train_rows = np.setdiff1d(all_rows, test_rows)
        design = build_design(dataset.subset(train_rows), kind)
        path = normalized_path(design)
        r_te, p_te = _held_out_block(dataset.subset(test_rows), kind, design.bandwidths)
        betas = path.at_many(lambdas)
        resid = r_te[None, :] - betas @ p_te.T
        errs[f] = np.einsum("ij,ij->i", resid, resid)
    return errs


def choose_index(mu: np.ndarray, sigma: np.ndarray, mode: str, sigma_weight: float = SIGMA_WEIGHT) -> int:
    """First grid index (largest lambda on ties) minimizing the CV criterion."""
    if mode == "standard":
        crit = mu
    elif mode == "modified":
        crit = mu - sigma_weight * sigma
    else:
        raise ValueError(f"mode must be 'standard' or 'modified', got {mode!r}")
    return int(np.argmin(crit))


def cv_select(
    dataset: Dataset,
    kind: str = "hsic",
    folds: int = DEFAULT_FOLDS,
    mode: CvMode = "modified",
    rng=None,
    n_lambdas: int = DEFAULT_LAMBDAS,
    sigma_weight: float = SIGMA_WEIGHT,
) -> CvSelection:
    """Select the lasso penalty by K-fold cross-validation.

    ``standard`` minimizes the mean held-out error ``mu``; ``modified``
    minimizes ``mu - sigma_weight * sigma`` where ``sigma`` is the standard
    deviation of the fold errors.
    """
    kind = _canonical(kind)
    if folds < 2:
        raise InsufficientSample(f"need at least 2 folds, got {folds}")
    if dataset.n < 2 * folds:
        raise InsufficientSample(f"n={dataset.n} is too small for {folds} folds (need n >= {2 * folds})")
    full_path = normalized_path(build_design(dataset, kind))
    if full_path.lambda_max <= 0.0:
        # no input correlates positively with the output: the empty model at every lambda
        lambdas = np.array([0.0])
        zeros = np.zeros(1)
        return CvSelection(0.0, mode, lambdas, zeros, zeros, 0, np.zeros(dataset.d))
    lambdas = lambda_grid(full_path.lambda_max, n_lambdas)
    errs = fold_errors(dataset, kind, fold_assignment(dataset.n, folds, rng), lambdas)
    mu = errs.mean(axis=0)
    sigma = errs.std(axis=0, ddof=1)
    idx = choose_index(mu, sigma, mode, sigma_weight)
    lam = float(lambdas[idx])
    return CvSelection(lam, mode, lambdas, mu, sigma, idx, full_path.at(lam))


def hsic_lasso_screen(
    dataset: Dataset,
    mode: CvMode = "modified",
    folds: int = DEFAULT_FOLDS,
    rng=None,
    kind: str = "hsic",
    alpha: float = 0.05,
) -> ScreeningReport:
    """Inputs with a positive lasso coefficient at the cross-validated penalty.

    Each outcome carries ``statistic = beta_k``; ``p_value`` is 0 for selected
    inputs and 1 otherwise (the lasso gives no p-values).
    """
    sel = cv_select(dataset, kind, folds, mode, rng)
    method = f"{_canonical(kind)}-lasso"
    outcomes = tuple(
        TestOutcome(float(b), 0.0 if b > 0 else 1.0, bool(b > 0), method, float(alpha), sel.lambda_hat)
        for b in sel.beta
    )
    return ScreeningReport(outcomes, method, dataset.n, float(alpha))
