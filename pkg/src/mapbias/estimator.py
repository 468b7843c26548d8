"""Monte Carlo estimation of pattern probabilities and the upper envelope.

Sampling is sharded for reproducibility and parallelism: shard i of size
shard_size draws everything from RngStream(seed, stream_offset + i).
Within a shard the draw order is fixed: one x0 block, one dynamics-noise
block per map iteration (omitted when eps == 0), then one
measurement-noise block covering all recorded values at once (omitted
when delta == 0).  A frequency table is therefore bit-identical for a
fixed (params, num_samples, seed, shard_size).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
import scipy.stats

from .complexity import ComplexityScale, c_lz_bulk
from .engine import RESAMPLE_RETRY_BUDGET, BoundaryPolicy, MapParams, RngStream
from .errors import ConfigurationError, FitError
from .symbolize import THRESHOLD, SymbolString

__all__ = [
    "DEFAULT_SHARD_SIZE",
    "DEFAULT_SAMPLES",
    "FrequencyTable",
    "DatasetRow",
    "Dataset",
    "BoundFit",
    "BiasMetrics",
    "sample_distribution",
    "build_dataset",
    "fit_upper_bound",
    "bound_curve",
    "bias_metrics",
]

DEFAULT_SHARD_SIZE = 1 << 16
DEFAULT_SAMPLES = 10**6


@dataclass(frozen=True)
class FrequencyTable:
    """Counts of observed digitized patterns over total_samples trajectories.

    patterns holds the packed bit values sorted ascending; counts aligns
    with it and sums to total_samples exactly.
    """

    params: MapParams
    total_samples: int
    patterns: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        if self.patterns.shape != self.counts.shape or self.patterns.ndim != 1:
            raise ValueError("patterns and counts must be aligned 1-D arrays")
        if self.patterns.size == 0:
            raise ValueError("frequency table cannot be empty")
        if int(self.counts.sum()) != self.total_samples:
            raise ValueError("counts must sum to total_samples")
        if (self.counts <= 0).any():
            raise ValueError("counts must be positive")
        if (self.patterns[1:] <= self.patterns[:-1]).any():
            raise ValueError("patterns must be strictly increasing")

    def __len__(self) -> int:
        return int(self.patterns.size)

    def count_of(self, pattern) -> int:
        """Count for a pattern given as SymbolString, '0'/'1' text, or packed int."""
        if isinstance(pattern, SymbolString):
            if pattern.length != self.params.n:
                return 0
            key = pattern.bits
        elif isinstance(pattern, str):
            if len(pattern) != self.params.n:
                return 0
            key = int(pattern, 2)
        else:
            key = int(pattern)
        idx = int(np.searchsorted(self.patterns, np.uint64(key)))
        if idx < len(self) and int(self.patterns[idx]) == key:
            return int(self.counts[idx])
        return 0

    def items(self) -> Iterator[tuple[SymbolString, int]]:
        n = self.params.n
        for bits, count in zip(self.patterns, self.counts):
            yield SymbolString(bits=int(bits), length=n), int(count)

    def merge(self, other: "FrequencyTable") -> "FrequencyTable":
        """Combine two tables sampled with disjoint streams from equal params."""
        if other.params != self.params:
            raise ValueError("cannot merge tables with different params")
        patterns = np.concatenate([self.patterns, other.patterns])
        counts = np.concatenate([self.counts, other.counts])
        order = np.argsort(patterns, kind="stable")
        patterns = patterns[order]
        counts = counts[order]
        fresh = np.empty(patterns.size, dtype=bool)
        fresh[0] = True
        fresh[1:] = patterns[1:] != patterns[:-1]
        starts = np.flatnonzero(fresh)
        return FrequencyTable(
            params=self.params,
            total_samples=self.total_samples + other.total_samples,
            patterns=patterns[starts],
            counts=np.add.reduceat(counts, starts),
        )


def _draw_x0_block(gen: np.random.Generator, count: int) -> np.ndarray:
    x = gen.uniform(0.0, 1.0, count)
    bad = x <= 0.0
    while bad.any():
        x[bad] = gen.uniform(0.0, 1.0, int(bad.sum()))
        bad = x <= 0.0
    return x


def _resample_into_range(x, det, eps, gen):
    # Redraw the noise of out-of-range lanes in rounds.  det always lies in
    # [0, 1] for this map family, so every lane is feasible; the budget only
    # guards pathological eps values.
    bad = (x < 0.0) | (x > 1.0)
    rounds = 0
    while bad.any():
        if rounds >= RESAMPLE_RETRY_BUDGET:
            raise ConfigurationError(
                f"resample retry budget exhausted after {rounds} rounds"
            )
        idx = np.flatnonzero(bad)
        x[idx] = det[idx] + gen.uniform(-eps, eps, idx.size)
        sub = (x[idx] < 0.0) | (x[idx] > 1.0)
        bad[:] = False
        bad[idx[sub]] = True
        rounds += 1
    return x


def _sample_shard_packed(params: MapParams, count: int, stream: RngStream) -> np.ndarray:
    """Digitized patterns of `count` fresh samples, packed MSB-first."""
    gen = stream.generator
    mu, eps, skip, n = params.mu, params.eps, params.transient_skip, params.n
    clamp = params.boundary_policy is BoundaryPolicy.CLAMP
    x = _draw_x0_block(gen, count)
    recorded = np.empty((n, count), dtype=np.float64)
    for k in range(skip + n):
        det = mu * x * (1.0 - x)
        if eps > 0.0:
            x = det + gen.uniform(-eps, eps, count)
            if clamp:
                np.clip(x, 0.0, 1.0, out=x)
            else:
                x = _resample_into_range(x, det, eps, gen)
        else:
            x = det
        if k >= skip:
            recorded[k - skip] = x
    if params.delta > 0.0:
        recorded = recorded + gen.uniform(-params.delta, params.delta, recorded.shape)
    packed = np.zeros(count, dtype=np.uint64)
    one = np.uint64(1)
    for row in recorded >= THRESHOLD:
        packed = (packed << one) | row.astype(np.uint64)
    return packed


def sample_distribution(
    params: MapParams,
    num_samples: int,
    seed: int,
    shard_size: int = DEFAULT_SHARD_SIZE,
    stream_offset: int = 0,
) -> FrequencyTable:
    """Sample digitized trajectories and tally the pattern frequencies.

    Each sample uses a fresh x0 and fresh noise.  stream_offset shifts the
    shard stream ids, so two calls with disjoint stream ranges merge into
    exactly the table one longer call would have produced.
    """
    if num_samples < 1:
        raise ValueError(f"num_samples must be >= 1, got {num_samples}")
    if shard_size < 1:
        raise ValueError(f"shard_size must be >= 1, got {shard_size}")
    packed = np.empty(num_samples, dtype=np.uint64)
    num_shards = -(-num_samples // shard_size)
    for i in range(num_shards):
        lo = i * shard_size
        hi = min(lo + shard_size, num_samples)
        stream = RngStream(seed, stream_offset + i)
        packed[lo:hi] = _sample_shard_packed(params, hi - lo, stream)
    patterns, counts = np.unique(packed, return_counts=True)
    return FrequencyTable(
        params=params,
        total_samples=num_samples,
        patterns=patterns,
        counts=counts.astype(np.int64),
    )


@dataclass(frozen=True)
class DatasetRow:
    """One observed pattern with its probability and complexity scores."""

    pattern: SymbolString
    count: int
    probability: float
    c_lz: float
    k_tilde: float


@dataclass(frozen=True)
class Dataset:
    """Columnar per-pattern records, sorted by descending probability.

    Ties in probability are broken by ascending packed pattern value.
    params and scale are carried when known (they are absent for datasets
    re-read from bare CSV).
    """

    n: int
    total_samples: int
    patterns: np.ndarray
    counts: np.ndarray
    probabilities: np.ndarray
    c_lz: np.ndarray
    k_tilde: np.ndarray
    params: MapParams | None = None
    scale: ComplexityScale | None = None

    def __len__(self) -> int:
        return int(self.patterns.size)

    def row(self, i: int) -> DatasetRow:
        return DatasetRow(
            pattern=SymbolString(bits=int(self.patterns[i]), length=self.n),
            count=int(self.counts[i]),
            probability=float(self.probabilities[i]),
            c_lz=float(self.c_lz[i]),
            k_tilde=float(self.k_tilde[i]),
        )

    def rows(self) -> Iterator[DatasetRow]:
        for i in range(len(self)):
            yield self.row(i)


def build_dataset(ft: FrequencyTable, scale: ComplexityScale) -> Dataset:
    """Attach probabilities and complexity scores to every observed pattern."""
    n = ft.params.n
    if scale.n != n:
        raise ValueError(f"scale n={scale.n} does not match params n={n}")
    c_values = c_lz_bulk(ft.patterns, n)
    k_values = scale.rescale(c_values)
    order = np.lexsort((ft.patterns, -ft.counts))
    return Dataset(
        n=n,
        total_samples=ft.total_samples,
        patterns=ft.patterns[order],
        counts=ft.counts[order],
        probabilities=ft.counts[order] / ft.total_samples,
        c_lz=c_values[order],
        k_tilde=k_values[order],
        params=ft.params,
        scale=scale,
    )


@dataclass(frozen=True)
class BoundFit:
    """Fitted upper envelope of log2(probability) against k_tilde."""

    slope: float
    intercept: float
    bin_width: float
    bin_points: tuple[tuple[float, float], ...]
    method: str

    @property
    def slope_log10(self) -> float:
        """Slope in decades of probability per complexity bit.

        This is the slope as it appears on plots with a log10 probability
        axis; the reference bound with a=1 has slope -log10(2) = -0.301
        in these units.
        """
        return self.slope * math.log10(2.0)

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "slope_log10": self.slope_log10,
            "intercept": self.intercept,
            "bin_width": self.bin_width,
            "bins": [
                {"k_center": k, "max_log2_p": p} for k, p in self.bin_points
            ],
            "method": self.method,
        }


def fit_upper_bound(
    ds: Dataset, bin_width: float = 1.0, exclude_singletons: bool = False
) -> BoundFit:
    """Fit the envelope: bin k_tilde, take max log2(p) per bin, run OLS.

    Bins of the given width start at 0; empty bins are skipped, never
    interpolated.  exclude_singletons drops patterns observed exactly once
    before binning (sensitivity analysis).
    """
    if bin_width <= 0.0:
        raise ValueError(f"bin_width must be positive, got {bin_width}")
    k = ds.k_tilde
    logp = np.log2(ds.probabilities)
    if exclude_singletons:
        keep = ds.counts > 1
        k = k[keep]
        logp = logp[keep]
    if k.size == 0:
        raise FitError("no rows to fit")
    bins = np.floor(k / bin_width).astype(np.int64)
    uniq = np.unique(bins)
    if uniq.size < 2:
        raise FitError(
            f"need at least 2 non-empty bins of width {bin_width}, got {uniq.size}"
        )
    centers = (uniq + 0.5) * bin_width
    maxima = np.array([logp[bins == b].max() for b in uniq])
    slope, intercept = np.polyfit(centers, maxima, 1)
    return BoundFit(
        slope=float(slope),
        intercept=float(intercept),
        bin_width=float(bin_width),
        bin_points=tuple(zip(centers.tolist(), maxima.tolist())),
        method=f"binned-max-OLS/{bin_width:g}",
    )


def bound_curve(a: float, b: float, k):
    """Reference probability bound 2**(-a*k - b); defaults are a=1, b=0."""
    result = 2.0 ** (-(a * np.asarray(k, dtype=np.float64)) - b)
    return float(result) if np.ndim(k) == 0 else result


@dataclass(frozen=True)
class BiasMetrics:
    """Summary statistics of how strongly a pattern distribution is biased."""

    distinct_patterns: int
    entropy_bits: float
    max_probability: float
    spearman_rho: float

    def to_dict(self) -> dict:
        rho = self.spearman_rho
        return {
            "distinct_patterns": self.distinct_patterns,
            "entropy_bits": self.entropy_bits,
            "max_probability": self.max_probability,
            "spearman_rho": None if math.isnan(rho) else rho,
        }


def bias_metrics(ds: Dataset) -> BiasMetrics:
    """Entropy, peak probability, and the k_tilde / log2(p) rank correlation."""
    if len(ds) == 0:
        raise ValueError("dataset is empty")
    p = ds.probabilities
    logp = np.log2(p)
    entropy = float(-(p * logp).sum()) + 0.0
    k = ds.k_tilde
    if len(ds) < 2 or np.all(k == k[0]) or np.all(logp == logp[0]):
        rho = float("nan")
    else:
        rho = float(scipy.stats.spearmanr(k, logp).statistic)
    return BiasMetrics(
        distinct_patterns=len(ds),
        entropy_bits=entropy,
        max_probability=float(p.max()),
        spearman_rho=rho,
    )
