"""Logistic-map iteration with additive uniform noise and seedable RNG streams.

The update rule is x' = mu*x*(1-x) + w, with w drawn i.i.d. from
U[-eps, eps].  A boundary policy keeps the state inside [0, 1] when a
noise kick would leave it.  All randomness flows through RngStream so
that runs reproduce exactly and parallel workers can claim disjoint
substreams of one master seed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "DEFAULT_STRING_LENGTH",
    "RESAMPLE_RETRY_BUDGET",
    "BoundaryPolicy",
    "MapParams",
    "RngStream",
    "RetryContext",
    "step",
    "apply_boundary",
    "generate_trajectory",
    "sample_x0",
]

DEFAULT_STRING_LENGTH = 25

# Noise redraws allowed under the resample policy before the (mu, eps)
# pair is declared degenerate.
RESAMPLE_RETRY_BUDGET = 10**6


class BoundaryPolicy(enum.Enum):
    """How to handle a post-noise state that falls outside [0, 1]."""

    CLAMP = "clamp"
    RESAMPLE = "resample"


class RngStream:
    """A named, reproducible substream of a master seed.

    The same (seed, stream_id) pair always yields the same draw sequence;
    distinct stream_ids give statistically independent streams.  Streams
    are cheap to construct, so parallel workers each build their own.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        if not 0 <= stream_id < 2**64:
            raise ValueError(f"stream_id must be an unsigned 64-bit integer, got {stream_id}")
        self.seed = seed
        self.stream_id = stream_id
        seq = np.random.SeedSequence(seed, spawn_key=(stream_id,))
        self.generator = np.random.Generator(np.random.PCG64(seq))

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        return self.generator.uniform(low, high, size)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


@dataclass(frozen=True)
class MapParams:
    """Full configuration of one sampling experiment.

    mu is the map parameter, eps the half-width of the dynamical noise,
    delta the half-width of the measurement noise applied to recorded
    values only.  transient_skip iterations are run and discarded before
    the n recorded ones.
    """

    mu: float
    eps: float = 0.0
    delta: float = 0.0
    n: int = DEFAULT_STRING_LENGTH
    transient_skip: int = 0
    boundary_policy: BoundaryPolicy = BoundaryPolicy.CLAMP

    def __post_init__(self):
        if not 0.0 <= self.mu <= 4.0:
            raise ValueError(f"mu must lie in [0, 4], got {self.mu}")
        if self.eps < 0.0:
            raise ValueError(f"eps must be >= 0, got {self.eps}")
        if self.delta < 0.0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")
        if not 1 <= self.n <= 64:
            raise ValueError(f"n must lie in [1, 64], got {self.n}")
        if self.transient_skip < 0:
            raise ValueError(f"transient_skip must be >= 0, got {self.transient_skip}")
        if not isinstance(self.boundary_policy, BoundaryPolicy):
            raise ValueError(f"unknown boundary policy: {self.boundary_policy!r}")


def step(x: float, mu: float, omega: float = 0.0) -> float:
    """One raw map update mu*x*(1-x) + omega, before any boundary handling."""
    return mu * x * (1.0 - x) + omega


@dataclass(frozen=True)
class RetryContext:
    """What the resample policy needs to redraw a noise kick.

    det_value is the noise-free image of the previous state; resampling
    adds a fresh U[-eps, eps] draw to it until the result lands in [0, 1].
    """

    det_value: float
    eps: float
    budget: int = RESAMPLE_RETRY_BUDGET


def apply_boundary(
    x_raw: float,
    policy: BoundaryPolicy,
    rng: RngStream | None = None,
    retry: RetryContext | None = None,
) -> float:
    """Map a raw post-noise value back into [0, 1] under the given policy."""
    if policy is BoundaryPolicy.CLAMP:
        return min(max(x_raw, 0.0), 1.0)
    if 0.0 <= x_raw <= 1.0:
        return x_raw
    if rng is None or retry is None:
        raise ValueError("resample policy needs an RngStream and a RetryContext")
    for _ in range(retry.budget):
        x = retry.det_value + rng.uniform(-retry.eps, retry.eps)
        if 0.0 <= x <= 1.0:
            return x
    raise ConfigurationError(
        f"resample retry budget exhausted after {retry.budget} draws; "
        f"(det={retry.det_value}, eps={retry.eps}) cannot reach [0, 1]"
    )


def generate_trajectory(params: MapParams, x0: float, rng: RngStream) -> np.ndarray:
    """Iterate the map from x0 and return the n post-transient values.

    Runs transient_skip + n updates; the first transient_skip values are
    discarded (their noise draws are consumed normally).  With eps == 0
    the result depends only on (params, x0).
    """
    if not 0.0 < x0 < 1.0:
        raise ValueError(f"x0 must lie in the open interval (0, 1), got {x0}")
    skip = params.transient_skip
    out = np.empty(params.n, dtype=np.float64)
    x = x0
    for k in range(skip + params.n):
        det = params.mu * x * (1.0 - x)
        if params.eps > 0.0:
            raw = det + rng.uniform(-params.eps, params.eps)
            x = apply_boundary(
                raw, params.boundary_policy, rng, RetryContext(det, params.eps)
            )
        else:
            x = det
        if k >= skip:
            out[k - skip] = x
    return out


def sample_x0(rng: RngStream) -> float:
    """Uniform draw from the open interval (0, 1); never exactly 0 or 1."""
    while True:
        x = rng.uniform()
        if 0.0 < x < 1.0:
            return x
