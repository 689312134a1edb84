"""Monte-Carlo harness for the sensitivity and screening benchmarks.

Every repetition owns a child of the master :class:`numpy.random.SeedSequence`;
the child is split once more into a data stream and one stream per method,
so all methods see the same sample (common random numbers) and results do
not depend on how repetitions are scheduled across threads.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..data import Dataset
from ..indep_tests import DEFAULT_B, DEFAULT_DRAWS, SCREEN_METHODS, screen
from ..measures import borgonovo_delta, dcor2, hsic, normalized_shares, sup_hsic
from ..outcomes import ScreeningReport
from .functions import (
    additive_model,
    analytic_sobol_additive,
    analytic_sobol_interaction,
    interaction_model,
    morris_model,
    sample_inputs,
)

LASSO_METHODS = ("lasso-standard", "lasso-modified")
EXPERIMENT_METHODS = SCREEN_METHODS + ("coefficient-bootstrap",) + LASSO_METHODS
QUICK_REPETITIONS = 200
FULL_REPETITIONS = 1000

ADDITIVE_MODELS = {
    "h1+h2": ((1.0, 1.0, 0.0), (0, 1)),
    "h1+h3": ((1.0, 0.0, 1.0), (0, 2)),
    "h2+h3": ((0.0, 1.0, 1.0), (1, 2)),
    "h1+h2+h3": ((1.0, 1.0, 1.0), (0, 1, 2)),
}
TABLE2_ALPHAS = (0.0, 1.0, 2.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0)
TABLE3_SIZES = (10, 25, 50, 100, 200)
TABLE3_RATIOS = (2, 5, 10)
TABLE3_METHODS = ("hsic-gamma", "dcov-quantile", "hsic-spectral", "dcov-spectral", "hsic-bootstrap", "dcov-bootstrap")
TABLE4_SIZES = (50, 100, 200)
TABLE4_METHODS = ("coefficient-bootstrap",) + LASSO_METHODS


def resolve_threads(threads: int | None = None) -> int:
    """``threads`` if given, else ``DEPSCREEN_THREADS``, else the CPU count."""
    if threads is None:
        env = os.environ.get("DEPSCREEN_THREADS")
        threads = int(env) if env else (os.cpu_count() or 1)
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    return threads


def _map_ordered(fn, items, threads: int | None):
    threads = resolve_threads(threads)
    if threads == 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _master(seed) -> np.random.SeedSequence:
    return seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)


def _children(seed, count: int) -> list[np.random.SeedSequence]:
    """``count`` independent child sequences; unlike ``spawn`` this leaves ``seed`` untouched."""
    m = _master(seed)
    return [np.random.SeedSequence(m.entropy, spawn_key=m.spawn_key + (i,)) for i in range(count)]


# ----------------------------------------------------------------------------
# Screening experiments
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    d: int = 5
    d_inert: int = 10
    repetitions: int = QUICK_REPETITIONS
    alpha: float = 0.05
    B: int = DEFAULT_B
    draws: int = DEFAULT_DRAWS
    folds: int = 5
    seed: int | None = 0
    methods: tuple[str, ...] = ("hsic-gamma",)
    model: str = "morris"

    def __post_init__(self):
        if self.n < 6:
            raise ValueError(f"n must be >= 6, got {self.n}")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.d < 1 or self.d_inert < 0:
            raise ValueError("need d >= 1 and d_inert >= 0")
        if self.model != "morris":
            raise ValueError(f"unknown screening model {self.model!r}")
        for m in self.methods:
            if m not in EXPERIMENT_METHODS:
                raise ValueError(f"unknown method {m!r}; choose from {EXPERIMENT_METHODS}")

    @property
    def ratio(self) -> float:
        return self.d_inert / self.d


@dataclass(frozen=True)
class MethodMetrics:
    method: str
    non_influential_rate: float
    influential_rate: float
    perfect_screening_rate: float
    per_input_rates: tuple[float, ...] = field(repr=False)


@dataclass(frozen=True)
class MetricsReport:
    config: ExperimentConfig
    metrics: dict[str, MethodMetrics]
    selections: np.ndarray = field(repr=False)  # (repetitions, methods, d + d_inert) booleans

    def __getitem__(self, method: str) -> MethodMetrics:
        return self.metrics[method]


def run_method(method: str, dataset: Dataset, config: ExperimentConfig, rng) -> ScreeningReport:
    """One screening run of ``method`` on ``dataset``."""
    if method in SCREEN_METHODS:
        return screen(dataset, method, config.alpha, rng, B=config.B, draws=config.draws)
    if method == "coefficient-bootstrap":
        from ..local_regression import coefficient_screen

        return coefficient_screen(dataset, "hsic", config.B, config.alpha, rng)
    from ..local_regression import hsic_lasso_screen

    mode = method.split("-", 1)[1]
    return hsic_lasso_screen(dataset, mode, config.folds, rng, alpha=config.alpha)


def _repetition(config: ExperimentConfig, child: np.random.SeedSequence) -> np.ndarray:
    data_seq, *method_seqs = child.spawn(1 + len(config.methods))
    rng = np.random.default_rng(data_seq)
    width = config.d + config.d_inert
    X = sample_inputs(config.n, width, "uniform01", rng)
    ds = Dataset.from_arrays(X, morris_model(config.d, config.d_inert, X))
    out = np.zeros((len(config.methods), width), dtype=bool)
    for j, (method, seq) in enumerate(zip(config.methods, method_seqs)):
        report = run_method(method, ds, config, np.random.default_rng(seq))
        out[j, list(report.selected)] = True
    return out


def summarize(selections: np.ndarray, d: int) -> tuple[float, float, float, np.ndarray]:
    """Percent non-influential selected, influential selected, perfect screenings, per-input rates."""
    sel = np.asarray(selections, dtype=bool)
    infl, inert = sel[:, :d], sel[:, d:]
    non_inf = 100.0 * inert.mean() if inert.size else 0.0
    power = 100.0 * infl.mean()
    perfect = 100.0 * np.mean(infl.all(axis=1) & ~inert.any(axis=1))
    return float(non_inf), float(power), float(perfect), 100.0 * sel.mean(axis=0)


def run_experiment(config: ExperimentConfig, threads: int | None = None) -> MetricsReport:
    """Repeat sample / screen on the Morris model and aggregate selection rates."""
    children = _children(config.seed, config.repetitions)
    sel = np.stack(_map_ordered(lambda c: _repetition(config, c), children, threads))
    metrics = {}
    for j, method in enumerate(config.methods):
        non_inf, power, perfect, per_input = summarize(sel[:, j], config.d)
        metrics[method] = MethodMetrics(method, non_inf, power, perfect, tuple(float(v) for v in per_input))
    return MetricsReport(config, metrics, sel)


def screening_table(
    sizes,
    ratios,
    methods,
    repetitions: int = QUICK_REPETITIONS,
    seed: int | None = 0,
    d: int = 5,
    threads: int | None = None,
    **config_kw,
) -> list[dict]:
    """Rows ``{n, r, method, non_influential, influential, perfect}`` over a size/ratio grid.

    The master seed is shared by every cell, so cells differing only in
    ``n`` or ``r`` are driven by the same seed streams.
    """
    rows = []
    for n in sizes:
        for r in ratios:
            cfg = ExperimentConfig(
                n=n, d=d, d_inert=int(round(r * d)), repetitions=repetitions, seed=seed, methods=tuple(methods), **config_kw
            )
            rep = run_experiment(cfg, threads)
            for m in methods:
                mm = rep[m]
                rows.append(
                    {
                        "n": n,
                        "r": r,
                        "method": m,
                        "non_influential": mm.non_influential_rate,
                        "influential": mm.influential_rate,
                        "perfect": mm.perfect_screening_rate,
                    }
                )
    return rows


def table3(quick: bool = True, seed: int | None = 0, methods=TABLE3_METHODS, sizes=TABLE3_SIZES, ratios=TABLE3_RATIOS, threads=None):
    reps = QUICK_REPETITIONS if quick else FULL_REPETITIONS
    return screening_table(sizes, ratios, methods, reps, seed, threads=threads)


def table4(quick: bool = True, seed: int | None = 0, methods=TABLE4_METHODS, sizes=TABLE4_SIZES, threads=None):
    reps = QUICK_REPETITIONS if quick else FULL_REPETITIONS
    return screening_table(sizes, (1,), methods, reps, seed, threads=threads)


# ----------------------------------------------------------------------------
# Sensitivity tables
# ----------------------------------------------------------------------------

_MEASURES = {
    "hsic": lambda x, y: hsic(x, y).value,
    "sup-hsic": lambda x, y: sup_hsic(x, y).value,
    "dcor": lambda x, y: dcor2(x, y).value,
    "borgonovo": lambda x, y: borgonovo_delta(x, y).value,
}


def _model_sample(model: str, n: int, rng) -> tuple[np.ndarray, np.ndarray, tuple[int, ...]]:
    """Inputs, output and the indices of the inputs reported for ``model``."""
    X = sample_inputs(n, 3, "uniform-sym", rng)
    if model in ADDITIVE_MODELS:
        alpha, active = ADDITIVE_MODELS[model]
        return X, additive_model(alpha, X), active
    if model.startswith("interaction:"):
        alpha = float(model.split(":", 1)[1])
        return X[:, :2], interaction_model(alpha, X[:, :2]), (0, 1)
    raise ValueError(f"unknown sensitivity model {model!r}")


def sensitivity_table(
    model: str,
    n: int = 1000,
    repetitions: int = 100,
    measures=("hsic", "dcor"),
    seed: int | None = 0,
    threads: int | None = None,
) -> dict[str, dict[str, np.ndarray]]:
    """Mean raw values and mean normalized shares (in %) of each measure.

    Returns ``{measure: {"value": (k,), "share": (k,)}}`` over the model's
    active inputs, plus an ``"analytic"`` entry with the exact Sobol values.
    """
    for m in measures:
        if m not in _MEASURES:
            raise ValueError(f"unknown measure {m!r}; choose from {tuple(_MEASURES)}")

    def one(child):
        X, y, active = _model_sample(model, n, np.random.default_rng(child))
        vals = np.array([[_MEASURES[m](X[:, k], y) for k in active] for m in measures])
        shares = np.array([normalized_shares(v) if np.sum(v) > 0 else np.zeros_like(v) for v in vals])
        return vals, shares

    out = _map_ordered(one, _children(seed, repetitions), threads)
    vals = np.mean([o[0] for o in out], axis=0)
    shares = np.mean([o[1] for o in out], axis=0)
    table = {m: {"value": vals[i], "share": shares[i]} for i, m in enumerate(measures)}
    table["analytic"] = _analytic(model)
    return table


def _analytic(model: str) -> dict[str, np.ndarray]:
    if model in ADDITIVE_MODELS:
        alpha, active = ADDITIVE_MODELS[model]
        s = analytic_sobol_additive(alpha)[list(active)]
        return {"value": s, "share": 100.0 * s / s.sum()}
    alpha = float(model.split(":", 1)[1])
    _, _, t1, t2 = analytic_sobol_interaction(alpha)
    s = np.array([t1, t2])
    return {"value": s, "share": 100.0 * s / s.sum()}


def table1(n: int = 1000, repetitions: int = 100, seed: int | None = 0, measures=("hsic", "dcor"), threads=None) -> list[dict]:
    """Rows ``{model, input, <measure>...}`` of mean normalized shares in %."""
    rows = []
    for i, model in enumerate(ADDITIVE_MODELS):
        tab = sensitivity_table(model, n, repetitions, measures, _child_seed(seed, i), threads)
        for j, k in enumerate(ADDITIVE_MODELS[model][1]):
            row = {"model": model, "input": k + 1}
            row.update({m: float(tab[m]["share"][j]) for m in measures})
            row["sobol"] = float(tab["analytic"]["share"][j])
            rows.append(row)
    return rows


def table2(
    alphas=TABLE2_ALPHAS,
    n: int = 1000,
    repetitions: int = 50,
    seed: int | None = 0,
    measures=("hsic", "borgonovo"),
    threads=None,
) -> list[dict]:
    """Rows ``{alpha, input, <measure>, <measure>_share, total_sobol, total_sobol_share}``."""
    rows = []
    for i, a in enumerate(alphas):
        tab = sensitivity_table(f"interaction:{a}", n, repetitions, measures, _child_seed(seed, i), threads)
        for j in range(2):
            row = {"alpha": float(a), "input": j + 1}
            for m in measures:
                row[m] = float(tab[m]["value"][j])
                row[f"{m}_share"] = float(tab[m]["share"][j])
            row["total_sobol"] = float(tab["analytic"]["value"][j])
            row["total_sobol_share"] = float(tab["analytic"]["share"][j])
            rows.append(row)
    return rows


def _child_seed(seed, i: int) -> np.random.SeedSequence:
    return _children(seed, i + 1)[i]
