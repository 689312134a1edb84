"""Positive lasso path by least angle regression (lasso variant).

Solves ``min_b 1/2 ||r - P b||^2 + lam * sum(b)`` over ``b >= 0`` for every
``lam >= 0``. Along the path the active coefficients keep their correlation
``c_k - (Q b)_k`` equal to ``lam``; a variable enters when its correlation
catches up with ``lam`` and leaves when its coefficient reaches zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegeneratePredictor, NonConvergence
from .design import LocalDesign

_ENTER_EPS = 1e-12


@dataclass(frozen=True)
class LarsPath:
    knots: np.ndarray  # decreasing, knots[0] = lam_max, knots[-1] = 0
    betas: np.ndarray  # (len(knots), d)

    def at(self, lam: float) -> np.ndarray:
        """Coefficients at ``lam`` (exact: the path is linear between knots)."""
        k = self.knots
        if lam >= k[0]:
            return self.betas[0].copy()
        if lam <= k[-1]:
            return self.betas[-1].copy()
        # knots are decreasing: find i with k[i] >= lam > k[i+1]
        i = int(np.searchsorted(-k, -lam, side="right")) - 1
        i = min(max(i, 0), len(k) - 2)
        lo, hi = k[i + 1], k[i]
        t = 0.0 if hi == lo else (hi - lam) / (hi - lo)
        return (1.0 - t) * self.betas[i] + t * self.betas[i + 1]

    def at_many(self, lams) -> np.ndarray:
        return np.array([self.at(l) for l in lams])

    @property
    def lambda_max(self) -> float:
        return float(self.knots[0])


def lars_positive_gram(Q, c, max_steps: int | None = None) -> LarsPath:
    """Positive lasso path from the normal equations ``Q = P'P``, ``c = P'r``.

    Ties in entry (equal correlations) go to the lowest index.
    """
    Q = np.asarray(Q, dtype=float)
    c = np.asarray(c, dtype=float)
    d = c.size
    if np.any(np.diag(Q) <= 0.0):
        bad = np.flatnonzero(np.diag(Q) <= 0.0).tolist()
        raise DegeneratePredictor(f"zero-norm predictor(s) {bad}")
    if max_steps is None:
        max_steps = 50 * d + 50

    beta = np.zeros(d)
    corr = c.copy()
    lam = max(float(corr.max()), 0.0)
    knots = [lam]
    betas = [beta.copy()]
    if lam <= 0.0:
        return LarsPath(np.array(knots), np.array(betas))

    scale = float(np.max(np.abs(c)))
    active = [int(np.argmax(corr))]
    last_dropped = -1
    for _ in range(max_steps):
        A = np.array(active)
        QA = Q[np.ix_(A, A)]
        try:
            delta = np.linalg.solve(QA, np.ones(len(A)))
        except np.linalg.LinAlgError:
            delta = np.linalg.lstsq(QA, np.ones(len(A)), rcond=None)[0]
        rate = Q[:, A] @ delta  # d corr / d(step)

        gamma = lam
        event = None
        in_active = np.zeros(d, dtype=bool)
        in_active[A] = True
        for j in range(d):
            if in_active[j]:
                continue
            den = 1.0 - rate[j]
            if den <= _ENTER_EPS:
                continue
            g = (lam - corr[j]) / den
            if j == last_dropped and g <= 1e-12 * max(lam, 1.0):
                continue
            g = max(g, 0.0)
            if g < gamma:
                gamma, event = g, ("add", j)
        for pos, k in enumerate(A):
            if delta[pos] < 0.0:
                g = -beta[k] / delta[pos]
                if g < gamma:
                    gamma, event = g, ("drop", int(k))

        beta[A] += gamma * delta
        lam -= gamma
        if event is None or lam <= 1e-14 * scale:
            lam = 0.0
        corr = c - Q @ beta
        last_dropped = -1
        if event is not None and event[0] == "drop":
            k = event[1]
            beta[k] = 0.0
            active.remove(k)
            last_dropped = k
        elif event is not None and lam > 0.0:
            active.append(event[1])
        beta[beta < 0.0] = 0.0
        knots.append(lam)
        betas.append(beta.copy())
        if lam == 0.0:
            break
        if not active:
            # every coefficient dropped out: restart from the current correlations
            j = int(np.argmax(corr))
            if corr[j] < lam * (1 - 1e-12):
                lam_new = max(float(corr[j]), 0.0)
                knots.append(lam_new)
                betas.append(beta.copy())
                lam = lam_new
                if lam == 0.0:
                    break
            active = [j]
    else:
        raise NonConvergence(f"positive LARS did not reach lambda = 0 in {max_steps} steps")
    return LarsPath(np.array(knots), np.array(betas))


def lars_positive_path(design: LocalDesign) -> LarsPath:
    """Positive lasso path of the local-measure regression."""
    Q, c, _ = design.gram_form()
    return lars_positive_gram(Q, c)


def path_kkt_violation(path: LarsPath, Q, c) -> float:
    """Largest relative KKT violation over all knots.

    Active coefficients need ``c_k - (Qb)_k = lam``; inactive ones need
    ``c_k - (Qb)_k <= lam``. Violations are scaled by ``max|c|``.
    """
    Q = np.asarray(Q, dtype=float)
    c = np.asarray(c, dtype=float)
    scale = max(float(np.max(np.abs(c))), 1e-300)
    worst = 0.0
    for lam, b in zip(path.knots, path.betas):
        corr = c - Q @ b
        act = b > 0
        if act.any():
            worst = max(worst, float(np.max(np.abs(corr[act] - lam))) / scale)
        if (~act).any():
            worst = max(worst, float(np.max(corr[~act] - lam, initial=0.0)) / scale)
    return worst
