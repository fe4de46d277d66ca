"""Reference model of the entangled-state variant of the protocol.

For N+1 parties sharing the maximally entangled state
(|0...0> + |1...1>)/sqrt(2), the product of the +-1 results of local
equatorial measurements at angles phi_j has expectation cos(sum phi_j).
Only that correlation function matters here, so the model is a closed-form
joint distribution over outcome vectors rather than a state simulator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .analytics import expectation_A
from .exact import ExactValue, ONE, exact_cos
from .phases import PROTOCOL_PHASES, Phase8
from .rng import RandomStream


@dataclass(frozen=True)
class GHZSetting:
    """Measurement phases of all N+1 parties."""

    phases: tuple[Phase8, ...]

    def __post_init__(self) -> None:
        if len(self.phases) < 2:
            raise ValueError("a setting needs at least two parties")

    def total(self) -> int:
        return sum(p.k for p in self.phases) % 8


@dataclass(frozen=True)
class GHZOutcome:
    """The +-1 results of all parties for one shot."""

    results: tuple[int, ...]

    def product(self) -> int:
        out = 1
        for r in self.results:
            out *= r
        return out


def ghz_correlation(setting: GHZSetting) -> ExactValue:
    """Expectation of the product of all outcomes: cos(sum phi_j), exactly."""
    return exact_cos(setting.total())


def ghz_joint_probability(setting: GHZSetting, results: tuple[int, ...]) -> ExactValue:
    """P(k vector) = 2^-(N+1) * (1 + prod(k) * cos(sum phi))."""
    if len(results) != len(setting.phases):
        raise ValueError("outcome vector length must match the setting")
    prod = 1
    for r in results:
        prod *= r
    corr = ghz_correlation(setting)
    base = ONE + corr.scaled(prod)
    return base.scaled(Fraction(1, 2 ** len(results)))


def ghz_sample(setting: GHZSetting, rng: RandomStream) -> GHZOutcome:
    """Draw one outcome vector from the joint distribution.

    Any proper subset of parties sees uniformly random results, so all but
    the last outcome are fair coin flips; the last is drawn from its exact
    conditional P(k_last = +1 | rest) = (1 + prod(rest) * cos(sum)) / 2.
    """
    n = len(setting.phases)
    results = [1 if rng.uniform() < 0.5 else -1 for _ in range(n - 1)]
    prod_rest = 1
    for r in results:
        prod_rest *= r
    corr = ghz_correlation(setting)
    p_plus = (ONE + corr.scaled(prod_rest)).scaled(Fraction(1, 2))
    results.append(1 if rng.uniform() < float(p_plus) else -1)
    return GHZOutcome(tuple(results))


def equivalence_check(max_n: int) -> bool:
    """Exhaustively confirm the single-qubit protocol matches this model.

    For every party count up to max_n recipients plus the distributor and
    every phase assignment over {0, pi/2, pi, 3pi/2}, the sequential
    expectation p+ - p- must equal the entangled-state correlation exactly.
    """
    if max_n > 6:
        raise ValueError("enumeration budget is max_n <= 6")
    for n in range(1, max_n + 1):
        for phases in product(PROTOCOL_PHASES, repeat=n + 1):
            if expectation_A(phases) != ghz_correlation(GHZSetting(phases)):
                return False
    return True
