"""Active-set non-negative least squares on the normal equations.

The local-measure designs have ``n(n+1)/2`` rows but only ``d`` columns, so
the solver works on ``Q = P'P`` and ``c = P'r`` and never touches the rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import NonConvergence
from .design import LocalDesign

KKT_RTOL = 1e-10


@dataclass(frozen=True)
class FitResult:
    beta: np.ndarray
    residual_norm2: float
    n_iter: int = 0
    history: tuple[float, ...] = field(default=(), repr=False)

    @property
    def active(self) -> tuple[int, ...]:
        return tuple(int(k) for k in np.flatnonzero(self.beta > 0))


def _solve(Q, rhs):
    try:
        return np.linalg.solve(Q, rhs)
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(Q, rhs, rcond=None)[0]


def quadratic_objective(beta, Q, c, rr) -> float:
    return float(rr - 2.0 * c @ beta + beta @ Q @ beta)


def nnls_gram(Q, c, rr: float = 0.0, max_iter: int | None = None) -> FitResult:
    """Lawson-Hanson NNLS for ``min_b rr - 2 c'b + b'Qb`` subject to ``b >= 0``.

    Parameters
    ----------
    Q : ndarray, shape (d, d)
        Positive semi-definite normal matrix.
    c : ndarray, shape (d,)
    rr : float
        Squared norm of the response; only used to report the residual.
    max_iter : int, optional
        Budget on outer (variable-entering) iterations, ``10 d`` by default.
    """
    Q = np.asarray(Q, dtype=float)
    c = np.asarray(c, dtype=float)
    d = c.size
    if max_iter is None:
        max_iter = 10 * d
    tol = KKT_RTOL * max(abs(rr), float(np.max(np.abs(c), initial=0.0)), 1e-300)

    x = np.zeros(d)
    passive = np.zeros(d, dtype=bool)
    w = c.copy()
    history = [quadratic_objective(x, Q, c, rr)]
    it = 0
    while not passive.all():
        cand = np.where(passive, -np.inf, w)
        t = int(np.argmax(cand))
        if cand[t] <= tol:
            break
        it += 1
        if it > max_iter:
            raise NonConvergence(f"NNLS did not converge in {max_iter} iterations")
        passive[t] = True
        while True:
            idx = np.flatnonzero(passive)
            s = np.zeros(d)
            s[idx] = _solve(Q[np.ix_(idx, idx)], c[idx])
            if np.all(s[idx] > 0):
                x = s
                break
            bad = idx[s[idx] <= 0]
            step = np.min(x[bad] / (x[bad] - s[bad]))
            x = x + step * (s - x)
            # any passive coordinate driven to (numerically) zero leaves the set
            drop = passive & (x <= 1e-14 * max(1.0, np.max(np.abs(x))))
            drop[bad[np.argmin(x[bad] / (x[bad] - s[bad]))]] = True
            x[drop] = 0.0
            passive &= ~drop
            if not passive.any():
                break
        w = c - Q @ x
        history.append(quadratic_objective(x, Q, c, rr))
    x[x < 0] = 0.0
    return FitResult(x, max(quadratic_objective(x, Q, c, rr), 0.0), it, tuple(history))


def nnls_fit(design: LocalDesign, max_iter: int | None = None) -> FitResult:
    """Non-negative least-squares weights of the local-measure regression."""
    Q, c, rr = design.gram_form()
    return nnls_gram(Q, c, rr, max_iter)


def kkt_violation(beta, Q, c) -> float:
    """Largest violation of the NNLS optimality conditions (0 at an exact solution).

    With ``g = Q b - c``: active coordinates need ``g = 0``, inactive ones
    need ``g >= 0``.
    """
    beta = np.asarray(beta, dtype=float)
    g = Q @ beta - c
    act = beta > 0
    v_act = np.max(np.abs(g[act]), initial=0.0)
    v_inact = np.max(-g[~act], initial=0.0)
    return float(max(v_act, v_inact))
