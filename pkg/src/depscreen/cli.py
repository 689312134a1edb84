"""Command-line interface.

Exit codes: 0 success, 1 runtime or numerical error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import math
import re
import secrets
import sys

import numpy as np

from .data import Dataset
from .errors import DepScreenError, ParseError, SchemaError
from .indep_tests import DEFAULT_B, DEFAULT_DRAWS, SCREEN_METHODS, permutation_test, screen
from .outcomes import ScreeningReport
from .report import emit_report, emit_rows

MIN_ROWS = 6
TEST_METHODS = SCREEN_METHODS
_X_COL = re.compile(r"^x([1-9][0-9]*)$")


# ----------------------------------------------------------------------------
# Data ingestion
# ----------------------------------------------------------------------------


def load_dataset(path) -> Dataset:
    """Read a CSV file with header ``x1..xd`` (inputs) and ``y...`` (output coordinates)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        x_cols, y_cols = {}, []
        for j, name in enumerate(header):
            m = _X_COL.match(name)
            if m:
                x_cols[int(m.group(1))] = j
            elif name.startswith("y"):
                y_cols.append(j)
            else:
                raise SchemaError(f"{path}: column {name!r} is neither an input (x1..xd) nor an output (y...)")
        if not y_cols:
            raise SchemaError(f"{path}: no output column (names starting with 'y')")
        if not x_cols:
            raise SchemaError(f"{path}: no input columns x1..xd")
        if sorted(x_cols) != list(range(1, len(x_cols) + 1)):
            raise SchemaError(f"{path}: input columns must be x1..x{len(x_cols)} without gaps")
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ParseError(f"{path}, line {line_no}: expected {len(header)} fields, got {len(row)}")
            vals = []
            for cell in row:
                try:
                    v = float(cell)
                except ValueError:
                    raise ParseError(f"{path}, line {line_no}: not a number: {cell.strip()!r}") from None
                if not math.isfinite(v):
                    raise ParseError(f"{path}, line {line_no}: non-finite value {cell.strip()!r}")
                vals.append(v)
            rows.append(vals)
    if len(rows) < MIN_ROWS:
        raise SchemaError(f"{path}: need at least {MIN_ROWS} data rows, got {len(rows)}")
    data = np.array(rows)
    X = data[:, [x_cols[k] for k in sorted(x_cols)]]
    y = data[:, y_cols]
    return Dataset.from_arrays(X, y[:, 0] if y.shape[1] == 1 else y)


# ----------------------------------------------------------------------------
# Argument parsing
# ----------------------------------------------------------------------------


def _alpha(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1), got {v}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, help="master seed (64-bit unsigned); drawn and printed if absent")
    common.add_argument("--output", default=None, help="output file (default: standard output)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--threads", type=_positive, default=None, help="worker threads (default: DEPSCREEN_THREADS or CPU count)")
    common.add_argument("--alpha", type=_alpha, default=0.05)

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--input", required=True, help="CSV file with columns x1..xd and y...")

    p = argparse.ArgumentParser(prog="depscreen", description="Dependence-measure screening of model inputs.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("measure", parents=[common, data], help="all dependence estimates per input")

    t = sub.add_parser("test", parents=[common, data], help="one test per input, each run independently")
    t.add_argument("--method", choices=TEST_METHODS, required=True)
    t.add_argument("--B", type=_positive, default=DEFAULT_B, help="resamples for bootstrap methods")
    t.add_argument("--draws", type=_positive, default=DEFAULT_DRAWS, help="null draws for spectral methods")

    s = sub.add_parser("screen", parents=[common, data], help="screening report with shared output-side work")
    s.add_argument("--method", choices=SCREEN_METHODS, required=True)
    s.add_argument("--B", type=_positive, default=DEFAULT_B)
    s.add_argument("--draws", type=_positive, default=DEFAULT_DRAWS)

    la = sub.add_parser("lasso", parents=[common, data], help="HSIC Lasso with cross-validated penalty")
    la.add_argument("--folds", type=_positive, default=5)
    la.add_argument("--cv-mode", choices=("standard", "modified"), default="modified")
    la.add_argument("--measure", choices=("hsic", "dcov", "covariance"), default="hsic")

    c = sub.add_parser("coef-test", parents=[common, data], help="bootstrap test of each regression coefficient")
    c.add_argument("--B", type=_positive, default=DEFAULT_B)
    c.add_argument("--measure", choices=("hsic", "dcov", "covariance"), default="hsic")
    c.add_argument("--index", type=int, default=None, help="test only this input (0-based)")

    b = sub.add_parser("bench", parents=[common], help="reproduce a benchmark table")
    b.add_argument("table", choices=("table1", "table2", "table3", "table4"))
    b.add_argument("--quick", action="store_true", help="200 repetitions instead of 1000 for screening tables")
    b.add_argument("--repetitions", type=_positive, default=None, help="override the repetition count")
    b.add_argument("--methods", default=None, help="comma-separated subset of methods (table3/table4)")
    b.add_argument("--sizes", default=None, help="comma-separated sample sizes (table3/table4)")
    b.add_argument("--B", type=_positive, default=DEFAULT_B)
    b.add_argument("--draws", type=_positive, default=DEFAULT_DRAWS)
    return p


def parse_args(argv=None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


# ----------------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------------


def _cmd_measure(args, rng):
    from .measures import borgonovo_delta, dcor2, dcov2, hsic, normalized_shares, pearson, spearman

    ds = load_dataset(args.input)
    y = ds.output
    rows = []
    for k, x in enumerate(ds.inputs):
        row = {"index": k, "hsic": hsic(x, y).value, "dcov2": dcov2(x, y).value, "dcor2": dcor2(x, y).value}
        scalar = x.shape[1] == 1 and y.shape[1] == 1
        row["pearson"] = pearson(x, y).value if scalar else None
        row["spearman"] = spearman(x, y).value if scalar else None
        try:
            row["borgonovo"] = borgonovo_delta(x, y).value if scalar else None
        except DepScreenError:
            row["borgonovo"] = None
        rows.append(row)
    for m in ("hsic", "dcor2"):
        vals = np.array([r[m] for r in rows])
        shares = normalized_shares(vals) if vals.sum() > 0 else np.zeros_like(vals)
        for r, s in zip(rows, shares):
            r[f"{m}_share"] = float(s)
    emit_rows(rows, args.format, args.output, {"command": "measure", "seed": args.seed, "n": ds.n})


def _cmd_test(args, rng):
    ds = load_dataset(args.input)
    family, _, flavour = args.method.partition("-")
    outcomes = []
    streams = rng.spawn(ds.d)
    for x, sub in zip(ds.inputs, streams):
        single = Dataset((x,), ds.output)
        if flavour == "bootstrap":
            outcomes.append(permutation_test(family, x, ds.output, args.B, args.alpha, sub))
        else:
            outcomes.append(screen(single, args.method, args.alpha, sub, B=args.B, draws=args.draws).outcomes[0])
    report = ScreeningReport(tuple(outcomes), args.method, ds.n, args.alpha)
    emit_report(report, args.format, args.output, args.seed)


def _cmd_screen(args, rng):
    ds = load_dataset(args.input)
    report = screen(ds, args.method, args.alpha, rng, B=args.B, draws=args.draws)
    emit_report(report, args.format, args.output, args.seed)


def _cmd_lasso(args, rng):
    from .local_regression import hsic_lasso_screen

    ds = load_dataset(args.input)
    report = hsic_lasso_screen(ds, args.cv_mode, args.folds, rng, kind=args.measure, alpha=args.alpha)
    emit_report(report, args.format, args.output, args.seed)


def _cmd_coef_test(args, rng):
    from .local_regression import bootstrap_coefficient_test, coefficient_screen

    ds = load_dataset(args.input)
    if args.index is None:
        report = coefficient_screen(ds, args.measure, args.B, args.alpha, rng)
    else:
        o = bootstrap_coefficient_test(ds, args.index, args.measure, args.B, args.alpha, rng)
        report = ScreeningReport((o,), o.method, ds.n, args.alpha)
    emit_report(report, args.format, args.output, args.seed)


def _split(text, cast):
    return None if text is None else tuple(cast(v) for v in text.split(",") if v.strip())


def _cmd_bench(args, rng):
    from .benchmarks import experiments as ex

    seed = args.seed
    meta = {"command": "bench", "table": args.table, "seed": seed, "quick": args.quick}
    if args.table == "table1":
        reps = args.repetitions or 100
        rows = ex.table1(repetitions=reps, seed=seed, threads=args.threads)
    elif args.table == "table2":
        reps = args.repetitions or 50
        rows = ex.table2(repetitions=reps, seed=seed, threads=args.threads)
    else:
        reps = args.repetitions or (ex.QUICK_REPETITIONS if args.quick else ex.FULL_REPETITIONS)
        methods = _split(args.methods, str)
        sizes = _split(args.sizes, int)
        if args.table == "table3":
            rows = ex.screening_table(
                sizes or ex.TABLE3_SIZES,
                ex.TABLE3_RATIOS,
                methods or ex.TABLE3_METHODS,
                reps,
                seed,
                threads=args.threads,
                alpha=args.alpha,
                B=args.B,
                draws=args.draws,
            )
        else:
            rows = ex.screening_table(
                sizes or ex.TABLE4_SIZES,
                (1,),
                methods or ex.TABLE4_METHODS,
                reps,
                seed,
                threads=args.threads,
                alpha=args.alpha,
                B=args.B,
            )
    meta["repetitions"] = reps
    emit_rows(rows, args.format, args.output, meta)


_COMMANDS = {
    "measure": _cmd_measure,
    "test": _cmd_test,
    "screen": _cmd_screen,
    "lasso": _cmd_lasso,
    "coef-test": _cmd_coef_test,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:  # argparse: 0 for --help, 2 for usage errors
        return int(exc.code or 0)
    if args.seed is None:
        args.seed = secrets.randbits(64)
        print(f"seed: {args.seed}", file=sys.stderr)
    rng = np.random.default_rng(args.seed)
    try:
        _COMMANDS[args.command](args, rng)
    except (ValueError, ArithmeticError, np.linalg.LinAlgError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
