"""Analytical test functions and their exact Sobol indices."""

from __future__ import annotations

import math
from typing import Literal

import numpy as np

from ..errors import ZeroModel

SQRT3 = math.sqrt(3.0)

# h2(x) = (exp(x) - a) / b, centered with unit variance on U[-sqrt3, sqrt3]
EXP_A = math.sinh(SQRT3) / SQRT3
EXP_B = math.sqrt(math.sinh(2.0 * SQRT3) / (2.0 * SQRT3) - EXP_A**2)
# h3(x) = a sin(2x)
SIN_A = 1.0 / math.sqrt(0.5 - math.sin(4.0 * SQRT3) / (8.0 * SQRT3))

ElementaryKind = Literal["linear", "exponential", "sinusoidal"]
_KIND_ALIASES = {1: "linear", 2: "exponential", 3: "sinusoidal", "h1": "linear", "h2": "exponential", "h3": "sinusoidal"}


def elementary(kind, x):
    """Evaluate h1 (linear), h2 (exponential) or h3 (sinusoidal)."""
    kind = _KIND_ALIASES.get(kind, kind)
    x = np.asarray(x, dtype=float)
    if kind == "linear":
        return x * 1.0
    if kind == "exponential":
        return (np.exp(x) - EXP_A) / EXP_B
    if kind == "sinusoidal":
        return SIN_A * np.sin(2.0 * x)
    raise ValueError(f"unknown elementary function {kind!r}")


def additive_model(alpha, x):
    """``a1 h1(x1) + a2 h2(x2) + a3 h3(x3)``; ``x`` has shape ``(..., 3)``."""
    a = np.asarray(alpha, dtype=float)
    x = np.asarray(x, dtype=float)
    return (
        a[0] * elementary("linear", x[..., 0])
        + a[1] * elementary("exponential", x[..., 1])
        + a[2] * elementary("sinusoidal", x[..., 2])
    )


def interaction_model(alpha: float, x):
    """``h2(x1) + alpha h2(x1) h2(x2)``; ``x`` has shape ``(..., 2)``."""
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    x = np.asarray(x, dtype=float)
    u1 = elementary("exponential", x[..., 0])
    u2 = elementary("exponential", x[..., 1])
    return u1 + alpha * u1 * u2


def morris_coefficients(d: int) -> tuple[float, float]:
    """Coefficients ``(a, b)`` of the Morris-type function with ``d`` active inputs."""
    s = math.sqrt(0.1 * (d - 1))
    return math.sqrt(12.0) - 6.0 * s, 12.0 * s


def morris_model(d: int, n_inert: int, x):
    """``a * (sum_i x_i + b * sum_{i<j} x_i x_j)`` over the first ``d`` inputs.

    ``x`` has shape ``(..., d + n_inert)``; the trailing ``n_inert`` columns
    do not enter the output.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != d + n_inert:
        raise ValueError(f"expected {d + n_inert} inputs, got {x.shape[-1]}")
    a, b = morris_coefficients(d)
    active = x[..., :d]
    s1 = active.sum(axis=-1)
    # sum_{i<j} x_i x_j = ((sum x)^2 - sum x^2) / 2
    pairs = 0.5 * (s1 * s1 - np.sum(active * active, axis=-1))
    return a * (s1 + b * pairs)


def analytic_sobol_additive(alpha) -> np.ndarray:
    a2 = np.asarray(alpha, dtype=float) ** 2
    total = a2.sum()
    if total == 0.0:
        raise ZeroModel("all coefficients are zero; the output is constant")
    return a2 / total


def analytic_sobol_interaction(alpha: float) -> tuple[float, float, float, float]:
    """``(S1, S2, S1_total, S2_total)`` for the interaction model."""
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    a2 = alpha * alpha
    return 1.0 / (1.0 + a2), 0.0, 1.0, a2 / (1.0 + a2)


def sample_inputs(n: int, count: int, distribution: str = "uniform-sym", rng=None) -> np.ndarray:
    """``(n, count)`` i.i.d. draws from U[-sqrt3, sqrt3] (``"uniform-sym"``) or U[0, 1]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(rng)
    if distribution == "uniform-sym":
        return rng.uniform(-SQRT3, SQRT3, size=(n, count))
    if distribution == "uniform01":
        return rng.random((n, count))
    raise ValueError(f"unknown input distribution {distribution!r}")
