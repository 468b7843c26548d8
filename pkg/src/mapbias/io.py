"""File formats: dataset CSV plus JSON sidecars for scales, fits, metrics.

All writers are atomic (temp file + rename) and embed no timestamps or
absolute paths, so re-running a command with the same seed reproduces
every output byte for byte.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .engine import BoundaryPolicy, MapParams
from .estimator import Dataset

__all__ = [
    "DATASET_COLUMNS",
    "atomic_write_text",
    "write_json",
    "read_json",
    "write_dataset_csv",
    "read_dataset_csv",
    "map_params_to_dict",
    "map_params_from_dict",
]

DATASET_COLUMNS = ("pattern", "count", "probability", "c_lz", "k_tilde")


def _fmt(value: float) -> str:
    # 17 significant digits: enough to round-trip any float64 exactly.
    return format(value, ".17g")


def atomic_write_lines(path, lines) -> Path:
    """Write an iterable of lines (no terminators) atomically."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            for line in lines:
                handle.write(line)
                handle.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def atomic_write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_json(payload: dict, path) -> Path:
    return atomic_write_text(path, json.dumps(payload, indent=2) + "\n")


def read_json(path) -> dict:
    with open(path) as handle:
        return json.load(handle)


def write_dataset_csv(ds: Dataset, path) -> Path:
    def lines():
        yield ",".join(DATASET_COLUMNS)
        n = ds.n
        for i in range(len(ds)):
            yield (
                f"{format(int(ds.patterns[i]), f'0{n}b')}"
                f",{int(ds.counts[i])}"
                f",{_fmt(ds.probabilities[i])}"
                f",{_fmt(ds.c_lz[i])}"
                f",{_fmt(ds.k_tilde[i])}"
            )

    return atomic_write_lines(path, lines())


def read_dataset_csv(path) -> Dataset:
    """Parse a dataset CSV back into a Dataset (params/scale unknown)."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty file")
        if tuple(header) != DATASET_COLUMNS:
            raise ValueError(
                f"{path}: expected columns {list(DATASET_COLUMNS)}, got {header}"
            )
        patterns, counts, probs, c_values, k_values = [], [], [], [], []
        n = None
        for row in reader:
            if len(row) != len(DATASET_COLUMNS):
                raise ValueError(f"{path}: malformed row {row!r}")
            text, count, prob, c_value, k_value = row
            if n is None:
                n = len(text)
            elif len(text) != n:
                raise ValueError(f"{path}: inconsistent pattern length in {text!r}")
            patterns.append(int(text, 2))
            counts.append(int(count))
            probs.append(float(prob))
            c_values.append(float(c_value))
            k_values.append(float(k_value))
    if n is None:
        raise ValueError(f"{path}: dataset has no rows")
    counts_arr = np.asarray(counts, dtype=np.int64)
    total = int(counts_arr.sum())
    probs_arr = np.asarray(probs, dtype=np.float64)
    if not np.array_equal(probs_arr, counts_arr / total):
        raise ValueError(f"{path}: probability column inconsistent with counts")
    return Dataset(
        n=n,
        total_samples=total,
        patterns=np.asarray(patterns, dtype=np.uint64),
        counts=counts_arr,
        probabilities=probs_arr,
        c_lz=np.asarray(c_values, dtype=np.float64),
        k_tilde=np.asarray(k_values, dtype=np.float64),
    )


def map_params_to_dict(params: MapParams) -> dict:
    return {
        "mu": params.mu,
        "eps": params.eps,
        "delta": params.delta,
        "n": params.n,
        "transient_skip": params.transient_skip,
        "boundary_policy": params.boundary_policy.value,
    }


def map_params_from_dict(payload: dict) -> MapParams:
    return MapParams(
        mu=float(payload["mu"]),
        eps=float(payload["eps"]),
        delta=float(payload["delta"]),
        n=int(payload["n"]),
        transient_skip=int(payload["transient_skip"]),
        boundary_policy=BoundaryPolicy(payload["boundary_policy"]),
    )
