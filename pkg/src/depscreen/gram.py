"""Pairwise Gram matrices, double centering and symmetric spectra.

All dependence measures in the package are bilinear forms in centered
Gram matrices, so this module is the common substrate: build the
``n x n`` matrix once per variable, center it once, and reuse it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .data import as_column
from .errors import AlreadyCentered, DegenerateColumn, DimensionMismatch, NonConvergence

GramKind = Literal["euclidean-distance", "gaussian-kernel"]

# eigenvalues below this fraction of the spectral radius are treated as 0
EIG_CLAMP_RTOL = 1e-10


@dataclass(frozen=True)
class GramMatrix:
    entries: np.ndarray
    kind: GramKind
    centered: bool = False

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


def empirical_bandwidth(col) -> np.ndarray:
    """Per-coordinate population variance, used as the squared kernel length.

    Parameters
    ----------
    col : array_like, shape (n,) or (n, q)

    Returns
    -------
    sigma2 : ndarray, shape (q,)

    Raises
    ------
    DegenerateColumn
        If some coordinate is constant.
    """
    z = as_column(col)
    sigma2 = z.var(axis=0)  # ddof=0
    if np.any(sigma2 <= 0.0):
        bad = np.flatnonzero(sigma2 <= 0.0).tolist()
        raise DegenerateColumn(f"constant coordinate(s) {bad}: bandwidth undefined")
    return sigma2


def gaussian_gram(col, sigma2) -> GramMatrix:
    """``K[i, j] = exp(-sum_k (z_ki - z_kj)**2 / sigma2_k)``."""
    z = as_column(col)
    sigma2 = np.atleast_1d(np.asarray(sigma2, dtype=float))
    if sigma2.shape != (z.shape[1],):
        raise DimensionMismatch(
            f"bandwidth has {sigma2.size} entries for a {z.shape[1]}-dimensional column"
        )
    if np.any(sigma2 <= 0.0) or not np.all(np.isfinite(sigma2)):
        raise ValueError("bandwidths must be finite and strictly positive")
    sq = squareform(pdist(z, "sqeuclidean", w=1.0 / sigma2))
    return GramMatrix(np.exp(-sq), "gaussian-kernel")


def distance_gram(col) -> GramMatrix:
    """``G[i, j] = ||z_i - z_j||_2``."""
    z = as_column(col)
    return GramMatrix(squareform(pdist(z, "euclidean")), "euclidean-distance")


def center_entries(a: np.ndarray) -> np.ndarray:
    """Closed-form ``H a H`` for a square array (no matrix products)."""
    row = a.mean(axis=1, keepdims=True)
    col = a.mean(axis=0, keepdims=True)
    return a - row - col + a.mean()


def double_center(g: GramMatrix) -> GramMatrix:
    """Return ``H G H`` with ``H = I - 11'/n``.

    Uses ``G_ij - rowmean_i - colmean_j + grandmean``; the explicit product
    is only ever formed in tests.
    """
    if g.centered:
        raise AlreadyCentered("Gram matrix is already double-centered")
    c = center_entries(g.entries)
    # kill the antisymmetric rounding left by the two mean passes
    c = 0.5 * (c + c.T)
    return GramMatrix(c, g.kind, centered=True)


def sym_eigenvalues(g) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, in descending order."""
    a = np.asarray(g, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    try:
        w = np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as exc:  # LAPACK syevd failed to converge
        raise NonConvergence(str(exc)) from exc
    return w[::-1].copy()


def clamp_spectrum(eigs, rtol: float = EIG_CLAMP_RTOL) -> np.ndarray:
    """Zero out eigenvalues that are negligible relative to the largest one."""
    w = np.array(eigs, dtype=float)
    if w.size == 0:
        return w
    scale = np.max(np.abs(w))
    w[np.abs(w) < rtol * scale] = 0.0
    return w
