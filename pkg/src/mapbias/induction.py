"""Next-bit prediction after a constant run: Laplace's rule versus an
algorithmic-probability estimate.

After observing the same symbol n times, Laplace's rule of succession
gives (n+1)/(n+2) for one more of the same, so the trend-break
probability shrinks like 1/n no matter what n is.  The
algorithmic-probability predictor instead puts the trend-break
probability at 2**(-K(n)) with K(n) the description length of n in bits,
so runs ending at compressible lengths (powers m**m, lengths computable
from a short map description) break with far higher predicted
probability than 1/n.  All K values here drop the additive O(1) term,
which depends on the description language.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .complexity import (
    MapDerived,
    PowerTower,
    Typical,
    canonical_map_description,
    integer_complexity_estimate,
)

__all__ = [
    "O1_CAVEAT",
    "ExplicitRun",
    "PowerTowerRun",
    "MapDerivedRun",
    "RunScenario",
    "PredictionReport",
    "laplace_predict",
    "ap_predict",
    "find_transition_index",
    "transition_lower_bound",
    "compare_predictors",
]

O1_CAVEAT = (
    "complexity estimates drop the additive O(1) term, which depends on "
    "the description language; probabilities are order-of-magnitude"
)

# State value at which iteration switches from log domain to plain floats.
LOG_LINEAR_SWITCH = 1e-6
MAX_TRANSITION_ITERATIONS = 10**9


@dataclass(frozen=True)
class ExplicitRun:
    """n observations of one symbol, with n carrying no special structure."""

    n: int
    observed_symbol: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"run length must be >= 1, got {self.n}")
        if self.observed_symbol not in (0, 1):
            raise ValueError("observed_symbol must be 0 or 1")


@dataclass(frozen=True)
class PowerTowerRun:
    """A run of m**m identical observations."""

    m: int
    observed_symbol: int = 0

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"m must be >= 2, got {self.m}")
        if self.observed_symbol not in (0, 1):
            raise ValueError("observed_symbol must be 0 or 1")


@dataclass(frozen=True)
class MapDerivedRun:
    """A run of 0s ending where the noise-free map first crosses threshold.

    x0 is given as a base-10 exponent because interesting starting points
    underflow every native float format.
    """

    mu: float
    x0_log10: float
    threshold: float = 0.5
    observed_symbol: int = 0

    def __post_init__(self):
        if not 1.0 < self.mu <= 4.0:
            raise ValueError(f"mu must lie in (1, 4], got {self.mu}")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must lie in (0, 1), got {self.threshold}")
        if self.x0_log10 >= math.log10(self.threshold):
            raise ValueError(
                f"x0 must start below the threshold: x0_log10={self.x0_log10}"
            )
        if self.observed_symbol not in (0, 1):
            raise ValueError("observed_symbol must be 0 or 1")


RunScenario = ExplicitRun | PowerTowerRun | MapDerivedRun


def laplace_predict(k_same: int, n: int) -> float:
    """Laplace rule of succession: (k+1)/(n+2) after k matches out of n."""
    if not 0 <= k_same <= n:
        raise ValueError(f"need 0 <= k_same <= n, got k_same={k_same}, n={n}")
    return (k_same + 1) / (n + 2)


def ap_predict(k_bits: float) -> float:
    """Probability 1 - 2**(-k_bits) that a run continues, K(n) = k_bits.

    The estimate holds up to the dropped O(1) term in K; see O1_CAVEAT.
    """
    if k_bits < 0.0:
        raise ValueError(f"k_bits must be >= 0, got {k_bits}")
    return 1.0 - 2.0 ** (-k_bits)


def transition_lower_bound(mu: float, x0_log10: float, threshold: float = 0.5) -> int:
    """Closed-form iteration lower bound for crossing the threshold.

    Since x(1-x) <= x, growth is at most a factor mu per step, so
    reaching the threshold needs at least log(threshold/x0)/log(mu)
    iterations.
    """
    if mu <= 1.0:
        raise ValueError(f"mu must exceed 1, got {mu}")
    return math.ceil((math.log(threshold) - x0_log10 * math.log(10.0)) / math.log(mu))


def find_transition_index(
    mu: float, x0_log10: float, threshold: float = 0.5
) -> int:
    """First iteration index at which the noise-free map reaches threshold.

    While the state sits below LOG_LINEAR_SWITCH the iteration runs on
    L = ln(x) via L <- ln(mu) + L + log1p(-exp(L)), which degrades
    gracefully to L <- ln(mu) + L once exp(L) underflows; afterwards it
    switches to plain 64-bit floats.  For x0 >= LOG_LINEAR_SWITCH no log
    step is taken and the result matches direct float iteration exactly.
    """
    if not 1.0 < mu <= 4.0:
        raise ValueError(f"mu must lie in (1, 4], got {mu}")
    if x0_log10 >= math.log10(threshold):
        raise ValueError(f"x0 must start below the threshold, got 1e{x0_log10}")
    if mu / 4.0 < threshold:
        # The map's supremum is mu/4, so the crossing is unreachable.
        raise ValueError(
            f"threshold {threshold} is unreachable for mu={mu}: "
            f"map supremum is {mu / 4.0}"
        )
    steps = 0
    log_threshold = math.log(threshold)
    if x0_log10 >= math.log10(LOG_LINEAR_SWITCH):
        x = 10.0 ** x0_log10
    else:
        ln_mu = math.log(mu)
        log_switch = math.log(LOG_LINEAR_SWITCH)
        level = x0_log10 * math.log(10.0)
        while level < log_switch:
            if level >= log_threshold:
                return steps
            level = ln_mu + level + math.log1p(-math.exp(level))
            steps += 1
            if steps > MAX_TRANSITION_ITERATIONS:
                raise ValueError(
                    f"no threshold crossing within {MAX_TRANSITION_ITERATIONS} iterations"
                )
        x = math.exp(level)
    while x < threshold:
        x = mu * x * (1.0 - x)
        steps += 1
        if steps > MAX_TRANSITION_ITERATIONS:
            raise ValueError(
                f"no threshold crossing within {MAX_TRANSITION_ITERATIONS} iterations"
            )
    return steps


@dataclass(frozen=True)
class PredictionReport:
    """Both predictors' view of one constant run."""

    run_length: int
    laplace_next_same: float
    laplace_trend_break: float
    ap_next_same: float
    ap_trend_break: float
    k_bits_used: float
    notes: str
    transition_lower_bound: int | None = None

    def to_dict(self) -> dict:
        payload = {
            "run_length": self.run_length,
            "laplace_next_same": self.laplace_next_same,
            "laplace_trend_break": self.laplace_trend_break,
            "ap_next_same": self.ap_next_same,
            "ap_trend_break": self.ap_trend_break,
            "k_bits_used": self.k_bits_used,
            "notes": self.notes,
        }
        if self.transition_lower_bound is not None:
            payload["transition_lower_bound"] = self.transition_lower_bound
        return payload


def compare_predictors(scenario: RunScenario) -> PredictionReport:
    """Resolve the run length, then evaluate both next-bit predictors."""
    lower = None
    if isinstance(scenario, ExplicitRun):
        run_length = scenario.n
        k_bits = integer_complexity_estimate(Typical(run_length))
        notes = O1_CAVEAT
    elif isinstance(scenario, PowerTowerRun):
        run_length = scenario.m**scenario.m
        k_bits = integer_complexity_estimate(PowerTower(scenario.m))
        notes = O1_CAVEAT
    elif isinstance(scenario, MapDerivedRun):
        run_length = find_transition_index(
            scenario.mu, scenario.x0_log10, scenario.threshold
        )
        lower = transition_lower_bound(
            scenario.mu, scenario.x0_log10, scenario.threshold
        )
        descriptor = MapDerived(scenario.mu, scenario.x0_log10, eps=0.0)
        k_bits = integer_complexity_estimate(descriptor)
        notes = (
            f"{O1_CAVEAT}; K from description "
            f"{canonical_map_description(scenario.mu, scenario.x0_log10)!r}"
        )
    else:
        raise TypeError(f"unknown scenario type: {type(scenario).__name__}")
    return PredictionReport(
        run_length=run_length,
        laplace_next_same=laplace_predict(run_length, run_length),
        laplace_trend_break=1.0 / (run_length + 2),
        ap_next_same=ap_predict(k_bits),
        ap_trend_break=2.0 ** (-k_bits),
        k_bits_used=k_bits,
        notes=notes,
        transition_lower_bound=lower,
    )
