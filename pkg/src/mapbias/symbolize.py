"""Threshold digitization of real trajectories into bit-packed binary strings."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import RngStream

__all__ = ["THRESHOLD", "SymbolString", "digitize", "perturb_measurements"]

THRESHOLD = 0.5


@dataclass(frozen=True)
class SymbolString:
    """A binary string of 1..64 symbols packed into an integer, MSB first.

    The first symbol of the text form is the highest bit, so the packed
    value of "001" is 0b001 = 1.  Bits above position `length` are zero.
    """

    bits: int
    length: int

    def __post_init__(self):
        if not 1 <= self.length <= 64:
            raise ValueError(f"length must lie in [1, 64], got {self.length}")
        if not 0 <= self.bits < (1 << self.length):
            raise ValueError(
                f"bits 0x{self.bits:x} has set bits beyond length {self.length}"
            )

    @classmethod
    def from_text(cls, text: str) -> "SymbolString":
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a binary string: {text!r}")
        return cls(bits=int(text, 2), length=len(text))

    @property
    def text(self) -> str:
        return format(self.bits, f"0{self.length}b")

    def reversed(self) -> "SymbolString":
        return SymbolString(bits=int(self.text[::-1], 2), length=self.length)

    def complement(self) -> "SymbolString":
        return SymbolString(
            bits=self.bits ^ ((1 << self.length) - 1), length=self.length
        )

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return self.text


def digitize(traj) -> SymbolString:
    """Binarize a real trajectory: symbol k is 1 iff traj[k] >= 0.5.

    The threshold comparison is inclusive on 0.5 and is applied to the
    stored values exactly as given.
    """
    values = np.asarray(traj, dtype=np.float64)
    if values.ndim != 1 or not 1 <= values.size <= 64:
        raise ValueError("trajectory must be one-dimensional with 1..64 values")
    bits = 0
    for flag in values >= THRESHOLD:
        bits = (bits << 1) | int(flag)
    return SymbolString(bits=bits, length=values.size)


def perturb_measurements(traj, delta: float, rng: RngStream) -> np.ndarray:
    """Add i.i.d. U[-delta, delta] measurement noise to each recorded value.

    The noisy values are returned unclamped; only the downstream threshold
    comparison consumes them, so leaving [0, 1] is harmless.
    """
    if delta < 0.0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    values = np.asarray(traj, dtype=np.float64)
    if delta == 0.0:
        return values.copy()
    return values + rng.uniform(-delta, delta, values.shape)
