"""Render complexity-probability scatter plots from dataset CSV files.

Consumes the estimator's file formats only: the dataset CSV with columns
pattern,count,probability,c_lz,k_tilde and (optionally) the analysis
JSON carrying the fitted envelope slope/intercept.  The probability axis
is drawn log10-scaled; the reference bound 2**(-k) then appears as a
straight black line from (0, 1) down to (n, 2**-n).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

EXPECTED_COLUMNS = ("pattern", "count", "probability", "c_lz", "k_tilde")

MARKER_GID = "dataset-markers"
BOUND_GID = "bound-line"
FIT_GID = "fit-line"


class DatasetFormatError(ValueError):
    """The input file does not match the dataset CSV schema."""


@dataclass(frozen=True)
class PlotSpec:
    """One rendering job: where the data lives and what to draw."""

    data_path: str
    out_path: str
    fit_path: str | None = None
    title: str | None = None
    show_bound: bool = True
    x_range: tuple[float, float] | None = None
    y_range: tuple[float, float] | None = None


def load_dataset(path) -> dict:
    """Read a dataset CSV; returns pattern length n plus the plot columns."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise DatasetFormatError(f"{path}: empty file")
        if tuple(header) != EXPECTED_COLUMNS:
            missing = [c for c in EXPECTED_COLUMNS if c not in header]
            unexpected = [c for c in header if c not in EXPECTED_COLUMNS]
            problems = []
            if missing:
                problems.append(f"missing column(s) {missing}")
            if unexpected:
                problems.append(f"unexpected column(s) {unexpected}")
            if not problems:
                problems.append(f"column order must be {list(EXPECTED_COLUMNS)}")
            raise DatasetFormatError(f"{path}: " + "; ".join(problems))
        k_tilde = []
        probability = []
        n = None
        for row in reader:
            if len(row) != len(EXPECTED_COLUMNS):
                raise DatasetFormatError(f"{path}: malformed row {row!r}")
            if n is None:
                n = len(row[0])
            k_tilde.append(float(row[4]))
            probability.append(float(row[2]))
    if n is None:
        raise DatasetFormatError(f"{path}: dataset has no rows")
    return {"n": n, "k_tilde": k_tilde, "probability": probability}


def load_fit(path) -> tuple[float, float]:
    """Slope and intercept of the fitted envelope from an analysis JSON."""
    with open(path) as handle:
        payload = json.load(handle)
    for field in ("slope", "intercept"):
        if payload.get(field) is None:
            raise DatasetFormatError(f"{path}: no usable '{field}' field")
    return float(payload["slope"]), float(payload["intercept"])


def build_figure(spec: PlotSpec):
    """Build the matplotlib figure; returns (figure, info).

    info records what was drawn: marker count, bound endpoints, fit line.
    """
    data = load_dataset(spec.data_path)
    n = data["n"]
    info = {"markers": len(data["k_tilde"]), "n": n, "bound": None, "fit": None}

    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    markers = ax.scatter(
        data["k_tilde"],
        data["probability"],
        s=14,
        color="tab:blue",
        alpha=0.6,
        linewidths=0,
        zorder=3,
    )
    markers.set_gid(MARKER_GID)

    if spec.show_bound:
        # 2**(-k) is a straight segment on the log axis
        bound_k = [0.0, float(n)]
        bound_p = [1.0, 2.0 ** (-float(n))]
        (bound,) = ax.plot(bound_k, bound_p, color="black", linewidth=1.5, zorder=2)
        bound.set_gid(BOUND_GID)
        info["bound"] = {"k": bound_k, "p": bound_p}

    if spec.fit_path is not None:
        slope, intercept = load_fit(spec.fit_path)
        k_max = max(data["k_tilde"]) or float(n)
        fit_k = [0.0, k_max]
        fit_p = [2.0**intercept, 2.0 ** (slope * k_max + intercept)]
        (fit_line,) = ax.plot(
            fit_k, fit_p, color="black", linewidth=1.2, linestyle="--", zorder=2
        )
        fit_line.set_gid(FIT_GID)
        info["fit"] = {"slope": slope, "intercept": intercept, "k": fit_k, "p": fit_p}

    ax.set_yscale("log")
    ax.set_xlabel("estimated complexity k_tilde (bits)")
    ax.set_ylabel("pattern probability")
    if spec.title:
        ax.set_title(spec.title)
    if spec.x_range:
        ax.set_xlim(*spec.x_range)
    if spec.y_range:
        ax.set_ylim(*spec.y_range)
    fig.tight_layout()
    return fig, info


def render_scatter(spec: PlotSpec) -> Path:
    """Render the figure to spec.out_path (format from the extension)."""
    out = Path(spec.out_path)
    suffix = out.suffix.lower()
    if suffix not in (".png", ".svg"):
        raise ValueError(f"unsupported image format {suffix!r}; use .png or .svg")
    fig, info = build_figure(spec)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        if suffix == ".svg":
            fig.savefig(out, format="svg", metadata={"Description": json.dumps(info)})
        else:
            fig.savefig(out, format="png", dpi=150)
    finally:
        plt.close(fig)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render a complexity-probability scatter plot from a dataset CSV.",
    )
    parser.add_argument("--data", required=True, help="dataset CSV path")
    parser.add_argument("--fit", default=None, help="analysis JSON with the fitted envelope")
    parser.add_argument("--out", required=True, help="output image (.png or .svg)")
    parser.add_argument("--title", default=None, help="figure title")
    parser.add_argument(
        "--no-bound", action="store_true", help="omit the reference bound line"
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(
        data_path=args.data,
        fit_path=args.fit,
        out_path=args.out,
        title=args.title,
        show_bound=not args.no_bound,
    )
    try:
        out = render_scatter(spec)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
