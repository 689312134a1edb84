"""Sample containers shared by every module."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InsufficientSample, LengthMismatch


def as_column(values, name: str = "column") -> np.ndarray:
    """Validate ``values`` and return it as an ``(n, q)`` float array.

    One-dimensional input is treated as a scalar variable (``q = 1``).
    """
    z = np.asarray(values, dtype=float)
    if z.ndim == 1:
        z = z[:, None]
    elif z.ndim != 2:
        raise ValueError(f"{name} must be 1-D or 2-D, got shape {z.shape}")
    if z.shape[0] < 2:
        raise InsufficientSample(f"{name} needs at least 2 observations, got {z.shape[0]}")
    if z.shape[1] < 1:
        raise ValueError(f"{name} has no coordinates")
    if not np.all(np.isfinite(z)):
        raise ValueError(f"{name} contains NaN or infinite entries")
    return z


def check_same_length(x: np.ndarray, y: np.ndarray) -> int:
    if x.shape[0] != y.shape[0]:
        raise LengthMismatch(f"sample sizes differ: {x.shape[0]} != {y.shape[0]}")
    return x.shape[0]


@dataclass(frozen=True)
class Dataset:
    """``n`` observations of ``d`` input columns and one output column.

    Each entry of ``inputs`` is an ``(n, q_k)`` array; ``output`` is ``(n, p)``.
    """

    inputs: tuple[np.ndarray, ...]
    output: np.ndarray

    def __post_init__(self):
        y = as_column(self.output, "output")
        cols = tuple(as_column(x, f"input {k}") for k, x in enumerate(self.inputs))
        for x in cols:
            check_same_length(x, y)
        object.__setattr__(self, "output", y)
        object.__setattr__(self, "inputs", cols)

    @classmethod
    def from_arrays(cls, X, y) -> "Dataset":
        """Build a dataset from an ``(n, d)`` matrix of scalar inputs."""
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        return cls(tuple(X[:, k] for k in range(X.shape[1])), y)

    @property
    def n(self) -> int:
        return self.output.shape[0]

    @property
    def d(self) -> int:
        return len(self.inputs)

    @property
    def p(self) -> int:
        return self.output.shape[1]

    def subset(self, rows: Sequence[int] | np.ndarray) -> "Dataset":
        rows = np.asarray(rows)
        return Dataset(tuple(x[rows] for x in self.inputs), self.output[rows])

    def with_input(self, k: int, column) -> "Dataset":
        cols = list(self.inputs)
        cols[k] = column
        return Dataset(tuple(cols), self.output)
