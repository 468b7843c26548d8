"""LZ76 phrase counting and the derived complexity scores for binary strings.

Two scores are built on the 1976 Lempel-Ziv exhaustive-history phrase
count N_w:

* c_lz averages the forward and reversed phrase counts and scales by
  log2(n), with the two constant strings 0^n and 1^n special-cased to
  log2(n) since describing them only takes encoding n.
* k_tilde maps c_lz affinely onto [0, log2(M)] = [0, n] using a
  ComplexityScale that fixes the minimum and maximum reachable c_lz.

The maximum is not knowable exactly, so scales are built either
exhaustively (small n), from a seeded random corpus, or from the
observed sample itself.
"""

from __future__ import annotations

import enum
import functools
import logging
import math
from dataclasses import dataclass

import numpy as np

from .engine import RngStream
from .errors import ConfigurationError
from .symbolize import SymbolString
from ._lz_kernels import phrase_counts_bidirectional

__all__ = [
    "DEFAULT_CORPUS_SIZE",
    "DEFAULT_CORPUS_SEED",
    "EXHAUSTIVE_MAX_N",
    "ScaleMethod",
    "ComplexityScale",
    "lz76_phrase_count",
    "phrase_counts_bulk",
    "c_lz",
    "c_lz_bulk",
    "k_tilde",
    "random_corpus_scale",
    "exhaustive_scale",
    "observed_scale",
    "Typical",
    "PowerTower",
    "MapDerived",
    "canonical_map_description",
    "integer_complexity_estimate",
]

logger = logging.getLogger(__name__)

DEFAULT_CORPUS_SIZE = 10**6
DEFAULT_CORPUS_SEED = 101

# Enumerating all 2^n strings stays affordable up to here.
EXHAUSTIVE_MAX_N = 22


def _as_text(s) -> str:
    if isinstance(s, SymbolString):
        return s.text
    if isinstance(s, str):
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a binary string: {s!r}")
        return s
    raise TypeError(f"expected SymbolString or str, got {type(s).__name__}")


def lz76_phrase_count(s) -> int:
    """Number of phrases in the LZ76 exhaustive-history parsing of s.

    Scanning left to right, each phrase is the shortest prefix of the
    unparsed remainder that does not occur as a substring of everything
    parsed so far plus that phrase minus its final symbol; a trailing
    reproducible fragment still counts as one phrase.  Under this
    convention N_w("0") == 1 and N_w(0^n) == 2 for n >= 2.
    """
    text = _as_text(s)
    n = len(text)
    if n == 1:
        return 1
    # Kaspar-Schuster scan: i is the candidate match start, l the current
    # phrase start, k the current match length, kmax the longest match seen.
    c = 1
    l = 1
    i = 0
    k = 1
    kmax = 1
    while True:
        if text[i + k - 1] == text[l + k - 1]:
            k += 1
            if l + k > n:
                c += 1
                break
        else:
            if k > kmax:
                kmax = k
            i += 1
            if i == l:
                c += 1
                l += kmax
                if l + 1 > n:
                    break
                i = 0
                k = 1
                kmax = 1
            else:
                k = 1
    return c


def phrase_counts_bulk(packed: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Phrase counts of each packed n-bit string and of its reversal."""
    if not 1 <= n <= 64:
        raise ValueError(f"n must lie in [1, 64], got {n}")
    packed = np.ascontiguousarray(packed, dtype=np.uint64)
    fwd = np.empty(packed.size, dtype=np.int64)
    rev = np.empty(packed.size, dtype=np.int64)
    phrase_counts_bidirectional(packed, n, fwd, rev)
    return fwd, rev


def c_lz(s) -> float:
    """Bidirectional LZ76 complexity of a binary string of length >= 2.

    Returns log2(n) for the constant strings, otherwise
    log2(n) * (N_w(s) + N_w(reversed s)) / 2.
    """
    text = _as_text(s)
    n = len(text)
    if n < 2:
        raise ValueError(f"c_lz needs length >= 2, got {n}")
    if text.count(text[0]) == n:
        return math.log2(n)
    return math.log2(n) * (lz76_phrase_count(text) + lz76_phrase_count(text[::-1])) / 2.0


def c_lz_bulk(packed: np.ndarray, n: int) -> np.ndarray:
    """Vectorized c_lz over packed n-bit strings."""
    if n < 2:
        raise ValueError(f"c_lz needs length >= 2, got {n}")
    packed = np.ascontiguousarray(packed, dtype=np.uint64)
    fwd, rev = phrase_counts_bulk(packed, n)
    log2n = math.log2(n)
    values = log2n * (fwd + rev) / 2.0
    trivial = (packed == 0) | (packed == np.uint64((1 << n) - 1))
    values[trivial] = log2n
    return values


class ScaleMethod(str, enum.Enum):
    """How the maximum reachable c_lz of a ComplexityScale was determined."""

    EXHAUSTIVE = "exhaustive"
    RANDOM_CORPUS = "random-corpus"
    OBSERVED_SAMPLE = "observed-sample"


@dataclass(frozen=True)
class ComplexityScale:
    """Affine normalization taking c_lz values onto [0, log2(M)] = [0, n].

    min_c is log2(n), attained exactly by 0^n and 1^n.  max_c depends on
    the method; values above it are clipped to log2(M) with a warning.
    """

    n: int
    min_c: float
    max_c: float
    method: ScaleMethod
    corpus_size: int | None = None
    corpus_seed: int | None = None

    def __post_init__(self):
        if not 2 <= self.n <= 64:
            raise ValueError(f"n must lie in [2, 64], got {self.n}")
        if not self.max_c > self.min_c:
            raise ConfigurationError(
                f"max_c ({self.max_c}) must exceed min_c ({self.min_c})"
            )

    @property
    def log2_m(self) -> float:
        """log2 of the number of possible output patterns (M = 2^n)."""
        return float(self.n)

    def rescale(self, c_values):
        """Map c_lz value(s) onto [0, log2_m], clipping sampling overshoot."""
        c = np.asarray(c_values, dtype=np.float64)
        k = self.log2_m * (c - self.min_c) / (self.max_c - self.min_c)
        over = int(np.count_nonzero(k > self.log2_m))
        if over:
            logger.warning(
                "%d c_lz value(s) exceed scale max_c=%.6g; clipping to %.6g",
                over,
                self.max_c,
                self.log2_m,
            )
        k = np.clip(k, 0.0, self.log2_m)
        return float(k) if np.isscalar(c_values) or c.ndim == 0 else k

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "log2_m": self.log2_m,
            "min_c": self.min_c,
            "max_c": self.max_c,
            "method": self.method.value,
            "corpus_size": self.corpus_size,
            "corpus_seed": self.corpus_seed,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ComplexityScale":
        return cls(
            n=int(payload["n"]),
            min_c=float(payload["min_c"]),
            max_c=float(payload["max_c"]),
            method=ScaleMethod(payload["method"]),
            corpus_size=payload.get("corpus_size"),
            corpus_seed=payload.get("corpus_seed"),
        )


def k_tilde(s, scale: ComplexityScale) -> float:
    """Scaled complexity estimate of a string, in [0, log2(M)] bits."""
    text = _as_text(s)
    if len(text) != scale.n:
        raise ValueError(f"string length {len(text)} does not match scale n={scale.n}")
    return scale.rescale(c_lz(text))


def _max_nontrivial_c(packed: np.ndarray, n: int) -> float:
    fwd, rev = phrase_counts_bulk(packed, n)
    trivial = (packed == 0) | (packed == np.uint64((1 << n) - 1))
    sums = np.where(trivial, 0, fwd + rev)
    best = int(sums.max())
    if best == 0:
        raise ConfigurationError("corpus contains no non-trivial strings")
    return math.log2(n) * best / 2.0


@functools.lru_cache(maxsize=8)
def random_corpus_scale(
    n: int,
    corpus_size: int = DEFAULT_CORPUS_SIZE,
    corpus_seed: int = DEFAULT_CORPUS_SEED,
) -> ComplexityScale:
    """Scale whose max_c is the largest c_lz over a seeded random corpus.

    Uniform random strings sit near maximal LZ complexity, so the corpus
    maximum converges quickly and is reproducible from the corpus seed.
    """
    if corpus_size < 1:
        raise ValueError(f"corpus_size must be >= 1, got {corpus_size}")
    gen = RngStream(corpus_seed, 0).generator
    if n < 64:
        corpus = gen.integers(0, 1 << n, size=corpus_size, dtype=np.uint64)
    else:
        corpus = gen.integers(0, 2**64, size=corpus_size, dtype=np.uint64, endpoint=False)
    return ComplexityScale(
        n=n,
        min_c=math.log2(n),
        max_c=_max_nontrivial_c(corpus, n),
        method=ScaleMethod.RANDOM_CORPUS,
        corpus_size=corpus_size,
        corpus_seed=corpus_seed,
    )


@functools.lru_cache(maxsize=8)
def exhaustive_scale(n: int) -> ComplexityScale:
    """Scale whose max_c is the exact maximum over all 2^n strings (n <= 22)."""
    if n > EXHAUSTIVE_MAX_N:
        raise ValueError(
            f"exhaustive normalization is limited to n <= {EXHAUSTIVE_MAX_N}, got {n}"
        )
    everything = np.arange(1 << n, dtype=np.uint64)
    return ComplexityScale(
        n=n,
        min_c=math.log2(n),
        max_c=_max_nontrivial_c(everything, n),
        method=ScaleMethod.EXHAUSTIVE,
    )


def observed_scale(patterns: np.ndarray, n: int) -> ComplexityScale:
    """Scale whose max_c is the largest c_lz among the observed patterns."""
    packed = np.ascontiguousarray(patterns, dtype=np.uint64)
    if packed.size == 0:
        raise ConfigurationError("cannot build a scale from an empty sample")
    return ComplexityScale(
        n=n,
        min_c=math.log2(n),
        max_c=_max_nontrivial_c(packed, n),
        method=ScaleMethod.OBSERVED_SAMPLE,
    )


@dataclass(frozen=True)
class Typical:
    """An integer with no special structure; complexity about log2(n) bits."""

    n: int


@dataclass(frozen=True)
class PowerTower:
    """The integer m**m; describing it only takes describing m."""

    m: int


@dataclass(frozen=True)
class MapDerived:
    """A run length computable from a short map description (mu, x0, eps)."""

    mu: float
    x0_log10: float
    eps: float = 0.0


def _fmt_number(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def canonical_map_description(mu: float, x0_log10: float, eps: float = 0.0) -> str:
    """Canonical minimal textual description of a map-derived scenario."""
    return f"mu={_fmt_number(mu)},x0=1e{_fmt_number(x0_log10)},eps={_fmt_number(eps)}"


def integer_complexity_estimate(descriptor) -> float:
    """Heuristic description length of an integer, in bits.

    All values drop the additive O(1) term, which depends on the choice
    of description language.  MapDerived uses the order of magnitude of
    an 8-bit-per-character textual description; it is a rough heuristic,
    deliberately small compared with log2(run length).
    """
    if isinstance(descriptor, Typical):
        if descriptor.n < 1:
            raise ValueError(f"integer must be >= 1, got {descriptor.n}")
        return math.log2(descriptor.n)
    if isinstance(descriptor, PowerTower):
        if descriptor.m < 1:
            raise ValueError(f"integer must be >= 1, got {descriptor.m}")
        return math.log2(descriptor.m)
    if isinstance(descriptor, MapDerived):
        description = canonical_map_description(
            descriptor.mu, descriptor.x0_log10, descriptor.eps
        )
        return math.log2(8 * len(description))
    raise TypeError(f"unknown descriptor type: {type(descriptor).__name__}")
