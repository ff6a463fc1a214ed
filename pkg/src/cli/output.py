"""Result emission: tables to stdout, CSV, JSON."""

import json
import sys
from typing import Optional

import numpy as np
import pandas as pd

from ..models import ValidationReport
from ..utils import ensure_parent


def banner(title: str) -> str:
    return "\n".join(["=" * 60, title, "=" * 60])


def format_matrix(name: str, X: np.ndarray) -> str:
    body = np.array2string(np.atleast_2d(X), precision=12, suppress_small=False, separator=", ")
    return f"{name} =\n{body}"


def write_text(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    ensure_parent(out)
    with open(out, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    print(f"[OK] Written: {out}")


def emit_frame(frame: pd.DataFrame, fmt: str, out: Optional[str] = None) -> None:
    """CSV always carries a header row and shortest round-trip floats; JSON is a list of records."""
    if fmt == "csv":
        write_text(frame.to_csv(index=False, lineterminator="\n"), out)
    elif fmt == "json":
        write_text(frame.to_json(orient="records", indent=2, double_precision=15) + "\n", out)
    else:
        write_text(frame.to_string(index=False, float_format=lambda x: f"{x:.10g}") + "\n", out)


def emit_mapping(title: str, values: dict, fmt: str, out: Optional[str] = None) -> None:
    if fmt == "json":
        write_text(json.dumps(values, indent=2, sort_keys=True) + "\n", out)
    elif fmt == "csv":
        frame = pd.DataFrame({'key': list(values), 'value': list(values.values())})
        emit_frame(frame, "csv", out)
    else:
        width = max(len(k) for k in values) + 2
        lines = [banner(title)]
        for key, value in values.items():
            shown = f"{value:.10g}" if isinstance(value, float) else str(value)
            lines.append(f"{key + ':':<{width}}{shown}")
        lines.append("=" * 60)
        write_text("\n".join(lines) + "\n", out)


def report_frame(report: ValidationReport) -> pd.DataFrame:
    return pd.DataFrame(
        [r.__dict__ for r in report.rows],
        columns=['test', 'metric', 'value', 'se', 'kind', 'status', 'detail'],
    )


def emit_report(report: ValidationReport, fmt: str, out: Optional[str] = None) -> None:
    """
    JSON output is byte-stable for a fixed configuration and seed: sorted
    keys, repr floats, no timings and no worker count.
    """
    if fmt == "json":
        write_text(json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n", out)
        return
    if fmt == "csv":
        emit_frame(report_frame(report), "csv", out)
        return

    frame = report_frame(report)
    frame['value'] = frame['value'].map(lambda x: "n/a" if x is None or pd.isna(x) else f"{x:.4g}")
    frame['se'] = frame['se'].map(lambda x: "n/a" if x is None or pd.isna(x) else f"{x:.2g}")
    meta = report.metadata
    lines = [
        banner("VALIDATION SUMMARY"),
        frame.to_string(index=False),
        "-" * 60,
        f"[SEED] {meta.get('seed')}   [PATHS] {meta.get('n_paths')}   [TIME] {report.elapsed:.2f}s",
        "=" * 60,
    ]
    write_text("\n".join(lines) + "\n", out)
