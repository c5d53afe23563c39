"""Render experiment summary CSVs into publication-style figures.

This package never recomputes metrics: it is a pure CSV-to-image transform
over the summary schema written by the pass-isac harness.  SVG output is
deterministic for identical input (fixed hash salt, no date metadata), so
rendered figures can be diffed in review.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

FORMATS = ("svg", "png")

SWEEP_X_COLUMNS = {"sidelength": "d_x", "elements": "n_tx"}
SWEEP_X_LABELS = {"sidelength": "side length (m)",
                  "elements": "elements per waveguide"}
SWEEP_VALUE_COLUMNS = ("weighted_mean_bits", "weighted_ci95_bits")
REGION_VALUE_COLUMNS = ("se_mean_bits", "se_ci95_bits",
                        "smi_mean_bits", "smi_ci95_bits")

_METHOD_STYLE = {
    "pass": {"color": "tab:blue", "marker": "o"},
    "baseline": {"color": "tab:red", "marker": "s"},
}
_ALPHA_LINES = ["-", "--", ":", "-."]


class SchemaError(ValueError):
    """The input CSV does not match the expected summary schema."""


def _deterministic_rc():
    plt.rcParams["svg.hashsalt"] = "pass-isac-plots"


def load_summary(path: str | Path, value_columns: tuple[str, ...],
                 key_columns: tuple[str, ...]) -> list[dict]:
    """Read and validate a summary CSV; metric cells must be finite and
    nonnegative."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file")
        missing = [c for c in (*key_columns, *value_columns)
                   if c not in reader.fieldnames]
        if missing:
            raise SchemaError(f"{path}: missing columns: {', '.join(sorted(missing))}")
        rows = []
        for lineno, raw in enumerate(reader, start=2):
            row = dict(raw)
            for column in value_columns:
                try:
                    value = float(raw[column])
                except (TypeError, ValueError) as exc:
                    raise SchemaError(
                        f"{path}:{lineno}: column {column!r}: not a number "
                        f"({raw[column]!r})") from exc
                if math.isnan(value) or value < 0.0:
                    raise SchemaError(
                        f"{path}:{lineno}: column {column!r}: metric cell must "
                        f"be finite and nonnegative (got {value!r})")
                row[column] = value
            rows.append(row)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def _save(fig, out_image: str | Path, image_format: str) -> Path:
    if image_format not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    out = Path(out_image)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, format=image_format, metadata={"Date": None}
                if image_format == "svg" else None)
    plt.close(fig)
    return out


def plot_sweep(summary_csv: str | Path, kind: str, out_image: str | Path,
               image_format: str = "svg") -> Path:
    """One weighted-rate curve per (method, communication weight)."""
    if kind not in SWEEP_X_COLUMNS:
        raise ValueError(f"kind must be one of {tuple(SWEEP_X_COLUMNS)}")
    x_column = SWEEP_X_COLUMNS[kind]
    rows = load_summary(summary_csv, SWEEP_VALUE_COLUMNS,
                        ("method", "alpha_w", x_column))

    _deterministic_rc()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    alphas = sorted({float(r["alpha_w"]) for r in rows})
    for method in sorted({r["method"] for r in rows}):
        style = _METHOD_STYLE.get(method, {"color": "tab:gray", "marker": "x"})
        for i, alpha in enumerate(alphas):
            series = [r for r in rows
                      if r["method"] == method and float(r["alpha_w"]) == alpha]
            series.sort(key=lambda r: float(r[x_column]))
            if not series:
                continue
            x = [float(r[x_column]) for r in series]
            y = [r["weighted_mean_bits"] for r in series]
            err = [r["weighted_ci95_bits"] for r in series]
            ax.errorbar(x, y, yerr=err, label=f"{method}, w={alpha:g}",
                        linestyle=_ALPHA_LINES[i % len(_ALPHA_LINES)],
                        capsize=2.5, **style)
    ax.set_xlabel(SWEEP_X_LABELS[kind])
    ax.set_ylabel("weighted rate (bits per channel use)")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, out_image, image_format)


def plot_region(summary_csv: str | Path, out_image: str | Path,
                image_format: str = "svg") -> Path:
    """Communication/sensing rate region: one polyline per method over the
    weight sweep."""
    rows = load_summary(summary_csv, REGION_VALUE_COLUMNS, ("method", "alpha_w"))

    _deterministic_rc()
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    for method in sorted({r["method"] for r in rows}):
        style = _METHOD_STYLE.get(method, {"color": "tab:gray", "marker": "x"})
        series = [r for r in rows if r["method"] == method]
        series.sort(key=lambda r: float(r["alpha_w"]))
        x = [r["se_mean_bits"] for r in series]
        y = [r["smi_mean_bits"] for r in series]
        ax.plot(x, y, label=method, **style)
    ax.set_xlabel("spectral efficiency (bits per channel use)")
    ax.set_ylabel("sensing rate bound (bits per sample)")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=9)
    fig.tight_layout()
    return _save(fig, out_image, image_format)
