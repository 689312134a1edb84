"""Linear model between local measures of pairs of observations.

For a local measure ``D`` the output matrix ``D(Y)`` is regressed on the
input matrices ``D(X_1), ..., D(X_d)`` with non-negative weights. With
``D = H K H`` (Gaussian kernel) the squared Frobenius residual expands into
HSIC terms, with ``D = H G H`` (distances) into distance covariances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..data import Dataset, as_column
from ..errors import UnsupportedMeasure
from ..gram import center_entries, distance_gram, empirical_bandwidth, gaussian_gram

LocalKind = Literal["hsic", "dcov", "covariance"]
_KIND_ALIASES = {
    "hsic-centered-kernel": "hsic",
    "dcov-centered-distance": "dcov",
}


def _canonical(kind: str) -> str:
    kind = _KIND_ALIASES.get(kind, kind)
    if kind not in ("hsic", "dcov", "covariance"):
        raise UnsupportedMeasure(f"unknown local measure {kind!r}")
    return kind


def local_matrix(z, kind: str, bandwidth=None) -> np.ndarray:
    """``D(z)`` for one variable.

    ``hsic`` and ``dcov`` give the ``(n, n)`` double-centered Gram matrix.
    ``covariance`` gives the length-``n`` vector ``n (z_i - mean) / sqrt(n - 1)``,
    whose squared norm is ``n^2`` times the sample variance.
    """
    kind = _canonical(kind)
    z = as_column(z)
    if kind == "covariance":
        if z.shape[1] != 1:
            raise UnsupportedMeasure("the covariance local measure needs scalar columns")
        n = z.shape[0]
        return n * (z[:, 0] - z[:, 0].mean()) / np.sqrt(n - 1.0)
    if kind == "hsic":
        bw = empirical_bandwidth(z) if bandwidth is None else bandwidth
        raw = gaussian_gram(z, bw).entries
    else:
        raw = distance_gram(z).entries
    c = center_entries(raw)
    return 0.5 * (c + c.T)


def vectorize(m: np.ndarray) -> np.ndarray:
    """Upper triangle (diagonal included) with off-diagonal entries scaled by sqrt(2).

    Inner products of the vectors equal Frobenius inner products of the
    symmetric matrices. One-dimensional input is returned unchanged.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim == 1:
        return m.copy()
    n = m.shape[0]
    iu = np.triu_indices(n)
    w = np.where(iu[0] == iu[1], 1.0, np.sqrt(2.0))
    return m[iu] * w


@dataclass(frozen=True)
class LocalDesign:
    """Vectorized response ``D(Y)`` and predictors ``D(X_k)`` (one column each)."""

    response: np.ndarray
    predictors: np.ndarray
    kind: str
    n: int
    bandwidths: tuple | None = None

    @property
    def d(self) -> int:
        return self.predictors.shape[1]

    def gram_form(self) -> tuple[np.ndarray, np.ndarray, float]:
        """``(P'P, P'r, r'r)``; the least-squares objective only needs these."""
        P = self.predictors
        r = self.response
        return P.T @ P, P.T @ r, float(r @ r)


def build_design(dataset: Dataset, kind: str = "hsic", bandwidths=None) -> LocalDesign:
    """Build the local-measure regression design for ``dataset``.

    ``bandwidths`` optionally fixes the Gaussian kernel lengths as a pair
    ``(input_bandwidths, output_bandwidth)``; by default each variable uses
    its empirical variance.
    """
    kind = _canonical(kind)
    if kind == "hsic":
        if bandwidths is None:
            bx = [empirical_bandwidth(x) for x in dataset.inputs]
            by = empirical_bandwidth(dataset.output)
        else:
            bx, by = bandwidths
        response = vectorize(local_matrix(dataset.output, kind, by))
        preds = [vectorize(local_matrix(x, kind, b)) for x, b in zip(dataset.inputs, bx)]
        bws = (tuple(bx), by)
    else:
        response = vectorize(local_matrix(dataset.output, kind))
        preds = [vectorize(local_matrix(x, kind)) for x in dataset.inputs]
        bws = None
    return LocalDesign(response, np.column_stack(preds), kind, dataset.n, bws)


def frobenius_objective(beta, design: LocalDesign) -> float:
    """``||D(Y) - sum_k beta_k D(X_k)||_F^2`` evaluated on the vectorized design."""
    resid = design.response - design.predictors @ np.asarray(beta, dtype=float)
    return float(resid @ resid)


def objective_expand(beta, dataset: Dataset, kind: str = "hsic") -> float:
    """Residual objective written with dependence estimators.

    ``Delta(Y, Y) - 2 sum_k b_k Delta(X_k, Y) + sum_kl b_k b_l Delta(X_k, X_l)``
    where ``Delta`` is HSIC_n, V_n^2 or the sample covariance according to
    ``kind``. Equals :func:`frobenius_objective` divided by ``n^2``.
    """
    from ..measures import dcov2_from_centered, hsic_from_grams

    kind = _canonical(kind)
    beta = np.asarray(beta, dtype=float)
    n = dataset.n
    if kind == "hsic":
        raw = [gaussian_gram(z, empirical_bandwidth(z)).entries for z in (*dataset.inputs, dataset.output)]
        cen = [center_entries(k) for k in raw]
        delta = lambda i, j: hsic_from_grams(cen[i], raw[j])  # noqa: E731
    elif kind == "dcov":
        cen = [center_entries(distance_gram(z).entries) for z in (*dataset.inputs, dataset.output)]
        delta = lambda i, j: dcov2_from_centered(cen[i], cen[j])  # noqa: E731
    else:
        cols = [as_column(z)[:, 0] for z in (*dataset.inputs, dataset.output)]
        delta = lambda i, j: float(np.cov(cols[i], cols[j])[0, 1])  # noqa: E731

    d = dataset.d
    y = d
    value = delta(y, y)
    for k in range(d):
        value -= 2.0 * beta[k] * delta(k, y)
        for l in range(d):
            value += beta[k] * beta[l] * delta(k, l)
    return float(value)
