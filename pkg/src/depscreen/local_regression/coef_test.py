"""Bootstrap test of a zero coefficient in the local-measure regression.

Only column ``k`` is resampled; the output and the other inputs stay fixed.
The refit only needs row/column ``k`` of ``Q = <D_k, D_l>`` and ``c_k``:
for the resampled raw Gram ``M = K_k[pi, pi]`` the centered matrix ``HMH``
satisfies ``<HMH, D_l> = <M, D_l>`` (``D_l`` is already centered) and
``||HMH||^2 = ||M||^2 - (2/n)||M 1||^2 + (1ᵀ M 1)^2 / n^2``, so all
``B`` refits cost one batched matrix product plus batched ``d x d`` solves.
"""

from __future__ import annotations

import numpy as np

from ..data import Dataset
from ..errors import InsufficientResamples
from ..gram import center_entries, distance_gram, empirical_bandwidth, gaussian_gram
from ..indep_tests import _check_alpha, draw_resamples
from ..outcomes import ScreeningReport, TestOutcome
from .design import _canonical, local_matrix
from .nnls import KKT_RTOL, nnls_gram

DEFAULT_B = 500
_CHUNK_ELEMENTS = 4_000_000


def _raw_matrix(z, kind: str) -> np.ndarray:
    if kind == "hsic":
        return gaussian_gram(z, empirical_bandwidth(z)).entries
    return distance_gram(z).entries


class _CoefficientProblem:
    """Full-sample normal equations plus what the column-``k`` refits need."""

    def __init__(self, dataset: Dataset, kind: str):
        self.kind = _canonical(kind)
        self.n = dataset.n
        self.d = dataset.d
        cols = (*dataset.inputs, dataset.output)
        if self.kind == "covariance":
            self.raw = None
            # rows are D(X_1..X_d), D(Y) as length-n vectors
            self.local = np.stack([local_matrix(z, "covariance") for z in cols])
            self.columns = [np.asarray(z, dtype=float)[:, 0] for z in dataset.inputs]
        else:
            self.raw = [_raw_matrix(z, self.kind) for z in dataset.inputs]
            cen = [center_entries(m) for m in self.raw]
            cen.append(center_entries(_raw_matrix(dataset.output, self.kind)))
            self.local = np.stack([0.5 * (m + m.T) for m in cen]).reshape(self.d + 1, -1)
        G = self.local @ self.local.T
        self.Q = G[: self.d, : self.d]
        self.c = G[: self.d, self.d]
        self.rr = float(G[self.d, self.d])

    def fit(self) -> np.ndarray:
        return nnls_gram(self.Q, self.c, self.rr).beta

    def resampled_products(self, ks, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """For inputs ``ks`` and each resample: ``<D_k^b, D_l>`` for all ``l`` (output last) and ``||D_k^b||^2``.

        Returns arrays of shape ``(len(ks), B, d + 1)`` and ``(len(ks), B)``.
        """
        ks = list(ks)
        B, n = idx.shape
        cross = np.empty((len(ks), B, self.d + 1))
        norm2 = np.empty((len(ks), B))
        if self.kind == "covariance":
            for j, k in enumerate(ks):
                z = self.columns[k][idx]
                loc = n * (z - z.mean(axis=1, keepdims=True)) / np.sqrt(n - 1.0)
                cross[j] = loc @ self.local.T
                norm2[j] = np.einsum("ij,ij->i", loc, loc)
            return cross, norm2
        # With counts c_a = #{i : pi_i = a}: ||M||^2 = c'(K o K)c and (M 1)_i = (K c)[pi_i].
        counts = np.zeros((B, n))
        np.add.at(counts, (np.arange(B)[:, None], idx), 1.0)
        for j, k in enumerate(ks):
            K = self.raw[k]
            kc = counts @ K
            rows = np.take_along_axis(kc, idx, axis=1)
            norm2[j] = (
                np.einsum("ij,ij->i", counts @ (K * K), counts)
                - 2.0 / n * np.einsum("ij,ij->i", rows, rows)
                + rows.sum(axis=1) ** 2 / (n * n)
            )
        step = max(1, _CHUNK_ELEMENTS // (n * n))
        for s in range(0, B, step):
            sl = idx[s : s + step]
            # flat positions of M = K[pi, pi] inside K.ravel(), shared by every input
            flat = (sl[:, :, None] * n + sl[:, None, :]).reshape(len(sl), -1)
            for j, k in enumerate(ks):
                cross[j, s : s + step] = np.take(self.raw[k].ravel(), flat) @ self.local.T
        return cross, np.maximum(norm2, 0.0)

    def refit_all(self, ks, idx: np.ndarray) -> np.ndarray:
        """``(len(ks), B)`` refitted coefficients, column ``k`` resampled by each row of ``idx``."""
        ks = list(ks)
        cross, norm2 = self.resampled_products(ks, idx)
        support = self.fit() > 0
        return np.stack([self._refit(k, cross[j], norm2[j], support) for j, k in enumerate(ks)])

    def _refit(self, k: int, cross: np.ndarray, norm2: np.ndarray, support: np.ndarray) -> np.ndarray:
        B, d = cross.shape[0], self.d
        Qb = np.broadcast_to(self.Q, (B, d, d)).copy()
        Qb[:, k, :] = cross[:, :d]
        Qb[:, :, k] = cross[:, :d]
        Qb[:, k, k] = norm2
        cb = np.broadcast_to(self.c, (B, d)).copy()
        cb[:, k] = cross[:, d]
        return _batched_nnls_coordinate(Qb, cb, k, support)


def _try_support(Qb, cb, support, tol):
    """Solve on a guessed support for every problem; flag those meeting the KKT conditions."""
    B, d = cb.shape
    beta = np.zeros((B, d))
    if support.any():
        S = np.flatnonzero(support)
        QS = Qb[:, S[:, None], S[None, :]]
        try:
            beta[:, S] = np.linalg.solve(QS, cb[:, S, None])[..., 0]
        except np.linalg.LinAlgError:
            return beta, np.zeros(B, dtype=bool)
    grad = cb - np.einsum("bij,bj->bi", Qb, beta)
    ok = np.all(beta[:, support] > 0.0, axis=1) & np.all(grad[:, ~support] <= tol[:, None], axis=1)
    return beta, ok


def _batched_nnls_coordinate(Qb, cb, k: int, support: np.ndarray) -> np.ndarray:
    """``beta_k`` of the NNLS solution for each ``(Qb[b], cb[b])``.

    Resampling one column rarely changes the active set beyond column ``k``
    itself, so the full-sample support with ``k`` added and with ``k``
    removed are tried first as batched linear solves; problems where
    neither guess certifies fall back to the active-set solver.
    """
    B = cb.shape[0]
    tol = KKT_RTOL * np.maximum(np.abs(cb).max(axis=1), 1e-300)
    out = np.full(B, np.nan)
    todo = np.ones(B, dtype=bool)
    for flag in (True, False):
        guess = support.copy()
        guess[k] = flag
        beta, ok = _try_support(Qb, cb, guess, tol)
        hit = todo & ok
        out[hit] = beta[hit, k]
        todo &= ~ok
        if not todo.any():
            return out
    for b in np.flatnonzero(todo):
        out[b] = nnls_gram(Qb[b], cb[b]).beta[k]
    return out


def _outcome(beta_k: float, boot: np.ndarray, alpha: float) -> TestOutcome:
    p = float(np.mean(boot > beta_k))
    return TestOutcome(float(beta_k), p, bool(p < alpha), "coefficient-bootstrap", float(alpha))


def _check(B: int, alpha: float):
    _check_alpha(alpha)
    if B < 100:
        raise InsufficientResamples(f"need at least 100 resamples, got {B}")


def bootstrap_coefficient_test(
    dataset: Dataset,
    k: int,
    kind: str = "hsic",
    B: int = DEFAULT_B,
    alpha: float = 0.05,
    rng=None,
) -> TestOutcome:
    """Test ``beta_k = 0`` by resampling input ``k`` with replacement.

    The p-value is the fraction of refits whose coefficient strictly exceeds
    the full-sample ``beta_k``; ties count as non-exceedance. The kernel
    bandwidth of input ``k`` is kept at its full-sample value.
    """
    _check(B, alpha)
    if not 0 <= k < dataset.d:
        raise IndexError(f"input index {k} out of range for d={dataset.d}")
    rng = np.random.default_rng(rng)
    prob = _CoefficientProblem(dataset, kind)
    beta = prob.fit()
    idx = draw_resamples(dataset.n, B, rng, replace=True)
    return _outcome(beta[k], prob.refit_all([k], idx)[0], alpha)


def coefficient_screen(
    dataset: Dataset,
    kind: str = "hsic",
    B: int = DEFAULT_B,
    alpha: float = 0.05,
    rng=None,
) -> ScreeningReport:
    """Coefficient test for every input; the B resample indices are shared across inputs."""
    _check(B, alpha)
    rng = np.random.default_rng(rng)
    prob = _CoefficientProblem(dataset, kind)
    beta = prob.fit()
    idx = draw_resamples(dataset.n, B, rng, replace=True)
    boot = prob.refit_all(range(dataset.d), idx)
    outcomes = tuple(_outcome(beta[k], boot[k], alpha) for k in range(dataset.d))
    return ScreeningReport(outcomes, "coefficient-bootstrap", dataset.n, float(alpha))
