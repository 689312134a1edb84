"""Point estimators of input/output dependence.

Correlation coefficients, distance covariance/correlation (V-statistic form),
HSIC with Gaussian kernels, its supremum over a bandwidth grid, and a
histogram-partition estimator of the moment-independent delta index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from .data import as_column, check_same_length
from .errors import (
    DegenerateColumn,
    EmptyGrid,
    InsufficientSample,
    InternalConsistencyError,
    ZeroSum,
)
from .gram import double_center, distance_gram, empirical_bandwidth, gaussian_gram
from .outcomes import TestOutcome

NEG_ROUNDING_TOL = 1e-10
SUP_HSIC_FACTORS = tuple(4.0**j for j in (-2, -1, 0, 1, 2))


@dataclass(frozen=True)
class DependenceEstimate:
    measure: str
    value: float
    input_index: int | None = None
    bandwidths: tuple[np.ndarray, np.ndarray] | None = None

    def __float__(self) -> float:
        return float(self.value)


def _clamp_nonnegative(value: float, scale: float, what: str) -> float:
    if value >= 0.0:
        return float(value)
    if value > -NEG_ROUNDING_TOL * max(1.0, scale):
        return 0.0
    raise InternalConsistencyError(f"{what} estimate is negative ({value:.3e})")


def _scalar(values, name):
    z = as_column(values, name)
    if z.shape[1] != 1:
        raise ValueError(f"{name} must be a scalar variable, got {z.shape[1]} coordinates")
    return z[:, 0]


# ----------------------------------------------------------------------------
# Correlation coefficients
# ----------------------------------------------------------------------------


def _pearson_values(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = np.dot(xc, xc)
    syy = np.dot(yc, yc)
    if sxx <= 0.0 or syy <= 0.0:
        raise DegenerateColumn("correlation undefined for a constant column")
    r = np.dot(xc, yc) / np.sqrt(sxx * syy)
    return float(np.clip(r, -1.0, 1.0))


def pearson(x, y, input_index: int | None = None) -> DependenceEstimate:
    x = _scalar(x, "x")
    y = _scalar(y, "y")
    check_same_length(x, y)
    return DependenceEstimate("pearson", _pearson_values(x, y), input_index)


def spearman(x, y, input_index: int | None = None) -> DependenceEstimate:
    """Pearson correlation of the (average-tie) ranks."""
    x = _scalar(x, "x")
    y = _scalar(y, "y")
    n = check_same_length(x, y)
    rx = stats.rankdata(x)
    ry = stats.rankdata(y)
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise DegenerateColumn("correlation undefined for a constant column")
    if len(np.unique(x)) == n and len(np.unique(y)) == n:
        d2 = np.sum((rx - ry) ** 2)
        r = 1.0 - 6.0 * d2 / (n * (n * n - 1.0))
    else:
        r = _pearson_values(rx, ry)
    return DependenceEstimate("spearman", float(r), input_index)


def correlation_t_test(r: float, n: int, alpha: float = 0.05, method: str = "pearson-t") -> TestOutcome:
    """Two-sided Student test of zero correlation with ``n - 2`` degrees of freedom."""
    if n < 3:
        raise InsufficientSample(f"t-test needs n >= 3, got {n}")
    if not abs(r) < 1.0:
        raise ValueError("|r| must be < 1 for the t statistic to be finite")
    t = r * np.sqrt((n - 2) / (1.0 - r * r))
    p = float(min(1.0, 2.0 * stats.t.sf(abs(t), n - 2)))
    return TestOutcome(float(t), p, p < alpha, method, alpha)


# ----------------------------------------------------------------------------
# Distance covariance / correlation
# ----------------------------------------------------------------------------


def dcov2_from_centered(a: np.ndarray, b: np.ndarray) -> float:
    """``n^-2 sum_ij A_ij B_ij`` for two double-centered distance Grams."""
    a = np.asarray(a)
    b = np.asarray(b)
    n = a.shape[0]
    v = float(np.vdot(a, b)) / (n * n)
    scale = float(np.sqrt(np.vdot(a, a) * np.vdot(b, b))) / (n * n)
    return _clamp_nonnegative(v, scale, "distance covariance")


def dcov2(x, y, input_index: int | None = None) -> DependenceEstimate:
    x = as_column(x, "x")
    y = as_column(y, "y")
    check_same_length(x, y)
    a = double_center(distance_gram(x)).entries
    b = double_center(distance_gram(y)).entries
    return DependenceEstimate("dcov2", dcov2_from_centered(a, b), input_index)


def dcor2_from_centered(a: np.ndarray, b: np.ndarray) -> float:
    vxy = dcov2_from_centered(a, b)
    denom = dcov2_from_centered(a, a) * dcov2_from_centered(b, b)
    if denom <= 0.0:
        return 0.0
    return float(np.clip(vxy / np.sqrt(denom), 0.0, 1.0))


def dcor2(x, y, input_index: int | None = None) -> DependenceEstimate:
    """Squared distance correlation; 0 when either distance variance vanishes."""
    x = as_column(x, "x")
    y = as_column(y, "y")
    check_same_length(x, y)
    a = double_center(distance_gram(x)).entries
    b = double_center(distance_gram(y)).entries
    return DependenceEstimate("dcor2", dcor2_from_centered(a, b), input_index)


# ----------------------------------------------------------------------------
# HSIC
# ----------------------------------------------------------------------------


def hsic_from_grams(kx_centered: np.ndarray, ky: np.ndarray) -> float:
    """``n^-2 Tr(Kx H Ky H)`` given ``H Kx H`` and the raw (or centered) ``Ky``."""
    kx_centered = np.asarray(kx_centered)
    ky = np.asarray(ky)
    n = kx_centered.shape[0]
    v = float(np.vdot(kx_centered, ky)) / (n * n)
    scale = float(np.sqrt(np.vdot(kx_centered, kx_centered) * np.vdot(ky, ky))) / (n * n)
    return _clamp_nonnegative(v, scale, "HSIC")


def _kernel_gram(z, sigma2):
    if sigma2 is None:
        sigma2 = empirical_bandwidth(z)
    return gaussian_gram(z, sigma2), np.atleast_1d(np.asarray(sigma2, dtype=float))


def hsic(x, y, bw_x=None, bw_y=None, input_index: int | None = None) -> DependenceEstimate:
    """Biased HSIC estimator with Gaussian kernels.

    Bandwidths default to the per-coordinate empirical variance of each
    variable.
    """
    x = as_column(x, "x")
    y = as_column(y, "y")
    check_same_length(x, y)
    kx, bw_x = _kernel_gram(x, bw_x)
    ky, bw_y = _kernel_gram(y, bw_y)
    value = hsic_from_grams(double_center(kx).entries, ky.entries)
    return DependenceEstimate("hsic", value, input_index, (bw_x, bw_y))


def default_bandwidth_grid(x, y) -> list[tuple[np.ndarray, np.ndarray]]:
    """Product grid ``{s_x * 4^j} x {s_y * 4^l}``, ``j, l in -2..2``."""
    sx = empirical_bandwidth(x)
    sy = empirical_bandwidth(y)
    return [(sx * fx, sy * fy) for fx, fy in itertools.product(SUP_HSIC_FACTORS, SUP_HSIC_FACTORS)]


def sup_hsic(x, y, grid: Sequence[tuple] | None = None, input_index: int | None = None) -> DependenceEstimate:
    """Largest HSIC value over a grid of ``(bw_x, bw_y)`` pairs."""
    x = as_column(x, "x")
    y = as_column(y, "y")
    check_same_length(x, y)
    if grid is None:
        grid = default_bandwidth_grid(x, y)
    grid = list(grid)
    if not grid:
        raise EmptyGrid("sup-HSIC needs at least one bandwidth pair")

    best = None
    centered_x: dict[bytes, np.ndarray] = {}
    for bx, by in grid:
        bx = np.atleast_1d(np.asarray(bx, dtype=float))
        by = np.atleast_1d(np.asarray(by, dtype=float))
        key = bx.tobytes()
        if key not in centered_x:
            centered_x[key] = double_center(gaussian_gram(x, bx)).entries
        value = hsic_from_grams(centered_x[key], gaussian_gram(y, by).entries)
        if best is None or value > best[0]:
            best = (value, bx, by)
    return DependenceEstimate("sup-hsic", best[0], input_index, (best[1], best[2]))


def normalized_shares(estimates: Iterable) -> np.ndarray:
    """Percentages ``100 * v_k / sum(v)``."""
    values = np.array([float(e) for e in estimates], dtype=float)
    if np.any(values < 0):
        raise ValueError("shares are only defined for non-negative indices")
    total = values.sum()
    if total <= 0.0:
        raise ZeroSum("indices sum to zero")
    return 100.0 * values / total


# ----------------------------------------------------------------------------
# Moment-independent delta
# ----------------------------------------------------------------------------


def borgonovo_delta(x, y, n_classes: int = 20, n_bins: int = 20, input_index: int | None = None) -> DependenceEstimate:
    """Partition estimator of ``1/2 E_x int |f_Y - f_{Y|X=x}|``.

    ``x`` is cut into ``n_classes`` equiprobable classes. The output is
    replaced by its normalized ranks (the index is invariant under monotone
    maps of ``y``) and histogrammed on ``n_bins`` equal-width bins shared by
    the marginal and every class.

    The plug-in L1 distance between a class histogram and the marginal one is
    dominated by multinomial noise at realistic class sizes. Each class is
    therefore split into two interleaved halves ``a`` and ``b`` and every bin
    contributes ``(sign(q_a - p) (q_b - p) + sign(q_b - p) (q_a - p)) / 2``,
    which has zero mean when the class and the marginal agree and tends to
    ``|q - p|`` when they clearly differ. The result is clipped at 0.
    """
    x = _scalar(x, "x")
    y = _scalar(y, "y")
    n = check_same_length(x, y)
    if n_classes < 1 or n_bins < 1:
        raise ValueError("n_classes and n_bins must be positive")
    if n < 10 * n_classes:
        raise InsufficientSample(f"need n >= {10 * n_classes} for {n_classes} classes, got {n}")

    order = np.argsort(x, kind="stable")
    cls = np.empty(n, dtype=np.intp)
    cls[order] = np.arange(n) * n_classes // n

    u = (stats.rankdata(y) - 0.5) / n
    edges = np.linspace(u.min(), u.max(), n_bins + 1)
    bins = np.clip(np.searchsorted(edges, u, side="right") - 1, 0, n_bins - 1)
    p = np.bincount(bins, minlength=n_bins) / n

    total = 0.0
    for c in range(n_classes):
        idx = np.flatnonzero(cls == c)
        qa = np.bincount(bins[idx[0::2]], minlength=n_bins) / len(idx[0::2])
        qb = np.bincount(bins[idx[1::2]], minlength=n_bins) / len(idx[1::2])
        total += 0.5 * np.sum(np.sign(qa - p) * (qb - p) + np.sign(qb - p) * (qa - p))
    value = max(0.5 * total / n_classes, 0.0)
    return DependenceEstimate("borgonovo-delta", float(value), input_index)
