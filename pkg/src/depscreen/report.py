"""Serialization of screening reports and benchmark tables (JSON and CSV)."""

from __future__ import annotations

import csv
import io
import json
import sys
from typing import TextIO

import numpy as np

from .outcomes import ScreeningReport

REPORT_FIELDS = ("index", "statistic", "p_value", "reject")


def fmt_float(value) -> float:
    """Round to 12 significant digits (the value written to reports)."""
    v = float(value)
    if not np.isfinite(v):
        return v
    return float(f"{v:.12g}")


def _clean(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return fmt_float(value)
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_clean(v) for v in value]
    return value


def report_to_dict(report: ScreeningReport, seed=None) -> dict:
    return {
        "method": report.method,
        "alpha": fmt_float(report.alpha),
        "seed": seed,
        "per_input": [
            {"index": k, "statistic": fmt_float(o.statistic), "p_value": fmt_float(o.p_value), "reject": bool(o.reject)}
            for k, o in enumerate(report.outcomes)
        ],
        "selected": [int(k) for k in report.selected],
    }


def _write_text(text: str, path) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv_text(rows: list[dict], fields) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(row.get(k)) for k in fields})
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return v


def emit_report(report: ScreeningReport, fmt: str = "json", path=None, seed=None) -> None:
    """Write ``report`` as JSON (one object) or CSV (one row per input) to ``path`` or stdout."""
    doc = report_to_dict(report, seed)
    if fmt == "json":
        _write_text(json.dumps(doc, indent=2) + "\n", path)
    elif fmt == "csv":
        _write_text(_csv_text(doc["per_input"], REPORT_FIELDS), path)
    else:
        raise ValueError(f"unknown report format {fmt!r}")


def emit_rows(rows: list[dict], fmt: str = "json", path=None, meta: dict | None = None) -> None:
    """Write table rows (benchmarks, measure listings) as JSON or CSV."""
    rows = [_clean(r) for r in rows]
    if fmt == "json":
        doc = dict(_clean(meta or {}))
        doc["rows"] = rows
        _write_text(json.dumps(doc, indent=2) + "\n", path)
    elif fmt == "csv":
        fields = list(rows[0]) if rows else []
        _write_text(_csv_text(rows, fields), path)
    else:
        raise ValueError(f"unknown report format {fmt!r}")


def read_json_report(stream: TextIO | str) -> dict:
    text = stream if isinstance(stream, str) else stream.read()
    return json.loads(text)
