"""Result records returned by tests and screening drivers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

Method = Literal[
    "hsic-gamma",
    "dcov-quantile",
    "hsic-spectral",
    "dcov-spectral",
    "hsic-bootstrap",
    "dcov-bootstrap",
    "pearson-bootstrap",
    "spearman-bootstrap",
    "pearson-t",
    "spearman-t",
    "coefficient-bootstrap",
    "hsic-lasso",
]


@dataclass(frozen=True)
class TestOutcome:
    """Decision of one input/output independence test."""

    __test__ = False  # keep pytest from collecting this class

    statistic: float
    p_value: float
    reject: bool
    method: str
    alpha: float
    threshold: float | None = None


@dataclass(frozen=True)
class ScreeningReport:
    outcomes: tuple[TestOutcome, ...]
    method: str
    n: int
    alpha: float
    selected: tuple[int, ...] = field(default=())

    def __post_init__(self):
        sel = tuple(k for k, o in enumerate(self.outcomes) if o.reject)
        object.__setattr__(self, "selected", sel)

    @property
    def d(self) -> int:
        return len(self.outcomes)
