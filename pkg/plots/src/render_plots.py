"""Render benchmark figures from a summarized comparison-count CSV.

Input schema (one header row):
    setting,n,algorithm,parameter,mean_clean,std_clean

One PNG per (setting, n) group: a mean curve per algorithm with the
standard deviation as a shaded band, and the n*log2(n) reference series as
a dotted line. The renderer only reads the CSV; rerunning on the same
input produces byte-identical images.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

REQUIRED_COLUMNS = ("setting", "n", "algorithm", "parameter", "mean_clean", "std_clean")
REFERENCE_ALGORITHM = "n_log2_n"

# Fixed style rotation keeps figures deterministic run to run.
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


@dataclass
class PlotSpec:
    """What to read, where to write, and how to scale the axes."""

    input_csv: str
    output_dir: str
    logy: bool = False
    x_label: str = "setting parameter"
    styles: dict = field(default_factory=dict)
    dpi: int = 120


def read_summary(path: str) -> list:
    """Rows as dicts with numeric n/mean/std; strict about the schema."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty input")
        missing = [c for c in REQUIRED_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise ValueError(f"{path}: missing columns {missing}")
        rows = []
        for rec in reader:
            rows.append(
                {
                    "setting": rec["setting"],
                    "n": int(rec["n"]),
                    "algorithm": rec["algorithm"],
                    "parameter": rec["parameter"],
                    "mean_clean": float(rec["mean_clean"]),
                    "std_clean": float(rec["std_clean"]),
                }
            )
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows


def _parameter_axis(values):
    """Numeric x positions plus tick labels; falls back to categories."""
    try:
        xs = [float(v) for v in values]
        return xs, values
    except ValueError:
        return list(range(len(values))), values


def build_group_figure(rows: list, setting: str, n: int, spec: PlotSpec):
    """One figure: a shaded mean curve per algorithm, dotted reference."""
    params = sorted({r["parameter"] for r in rows}, key=_param_key)
    xs, labels = _parameter_axis(params)
    x_of = dict(zip(params, xs))
    algorithms = sorted({r["algorithm"] for r in rows})
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    color_cycle = iter(_COLORS)
    for algo in algorithms:
        series = {r["parameter"]: r for r in rows if r["algorithm"] == algo}
        pts = [p for p in params if p in series]
        sx = [x_of[p] for p in pts]
        means = [series[p]["mean_clean"] for p in pts]
        stds = [series[p]["std_clean"] for p in pts]
        if algo == REFERENCE_ALGORITHM:
            ax.plot(sx, means, linestyle=":", color="red", linewidth=1.6, label="n log2 n")
            continue
        style = spec.styles.get(algo, {})
        color = style.get("color", next(color_cycle))
        ax.plot(sx, means, marker="o", markersize=3.5, linewidth=1.4, color=color, label=algo)
        lo = [m - s for m, s in zip(means, stds)]
        hi = [m + s for m, s in zip(means, stds)]
        ax.fill_between(sx, lo, hi, alpha=0.2, color=color, linewidth=0)
    if labels is not params or not _all_numeric(params):
        ax.set_xticks(xs)
        ax.set_xticklabels(labels)
    if spec.logy:
        ax.set_yscale("log")
    ax.set_xlabel(spec.x_label)
    ax.set_ylabel("clean comparisons")
    ax.set_title(f"{setting}, n = {n}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def _param_key(p: str):
    try:
        return (0, float(p), "")
    except ValueError:
        return (1, 0.0, p)


def _all_numeric(params) -> bool:
    try:
        for p in params:
            float(p)
        return True
    except ValueError:
        return False


def render(spec: PlotSpec) -> list:
    """Write one PNG per (setting, n) group; returns the file paths."""
    rows = read_summary(spec.input_csv)
    os.makedirs(spec.output_dir, exist_ok=True)
    groups: dict = {}
    for row in rows:
        groups.setdefault((row["setting"], row["n"]), []).append(row)
    written = []
    for (setting, n), group in sorted(groups.items()):
        fig = build_group_figure(group, setting, n, spec)
        name = f"{_safe(setting)}_n{n}.png"
        path = os.path.join(spec.output_dir, name)
        fig.savefig(path, dpi=spec.dpi, metadata={"Software": "render_plots"})
        plt.close(fig)
        written.append(path)
    return written


def _safe(text: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "-" for c in text)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="render_plots", description=__doc__)
    parser.add_argument("summary_csv", help="summarized CSV (from the harness plotdata step)")
    parser.add_argument("outdir", help="directory for the PNG files")
    parser.add_argument("--logy", action="store_true", help="log-scale the comparison axis")
    args = parser.parse_args(argv)
    try:
        written = render(PlotSpec(args.summary_csv, args.outdir, logy=args.logy))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
