"""Stochastic gates emulating a heralded single-photon source and detection.

The source emits photon pairs with Poissonian counting statistics inside
each collection window; a round is usable only when exactly one trigger
photon was seen (``HERALDED``) and the partner photon then produced a
coincidence click.  Everything else optics can do wrong is lumped into a
single symmetric flip of the final outcome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .rng import RandomStream

# Default emulation constants, chosen so a 25000-round reference session
# reproduces the calibration count chain (z_one ~ 9125, z_raw ~ 2107,
# QBER ~ 2.34%):
#   0.89  solves mu * exp(-mu) = 9125/25000 = 0.365   (sub-unity root)
#   0.231 = 2107 / 9125
#   0.0234 is the residual error rate on compared valid rounds
DEFAULT_HERALD_MU = 0.89
DEFAULT_COINCIDENCE_ETA = 0.231
DEFAULT_FLIP_E = 0.0234


class HeraldResult(Enum):
    NO_HERALD = "no_herald"
    HERALDED = "heralded"
    MULTI = "multi"


@dataclass(frozen=True)
class NoiseSpec:
    """Physical-layer parameters for one session."""

    herald_mu: float = DEFAULT_HERALD_MU
    coincidence_eta: float = DEFAULT_COINCIDENCE_ETA
    flip_e: float = DEFAULT_FLIP_E

    def __post_init__(self) -> None:
        if self.herald_mu < 0:
            raise ValueError(f"herald_mu must be >= 0, got {self.herald_mu}")
        if not 0.0 <= self.coincidence_eta <= 1.0:
            raise ValueError(f"coincidence_eta must be in [0, 1], got {self.coincidence_eta}")
        if not 0.0 <= self.flip_e <= 1.0:
            raise ValueError(f"flip_e must be in [0, 1], got {self.flip_e}")


def herald_gate(spec: NoiseSpec, rng: RandomStream) -> HeraldResult:
    """Classify the trigger count n ~ Poisson(herald_mu) as 0 / 1 / >=2.

    Only the trichotomy matters downstream, so it is drawn from a single
    uniform against the exact pmf terms P(0) = e^-mu and P(1) = mu e^-mu.
    """
    u = rng.uniform()
    p0 = math.exp(-spec.herald_mu)
    if u < p0:
        return HeraldResult.NO_HERALD
    if u < p0 * (1.0 + spec.herald_mu):
        return HeraldResult.HERALDED
    return HeraldResult.MULTI


def coincidence_gate(spec: NoiseSpec, rng: RandomStream) -> bool:
    """Did the heralded partner photon produce a coincidence click?"""
    return rng.uniform() < spec.coincidence_eta


def flip_outcome(outcome: int, spec: NoiseSpec, rng: RandomStream) -> int:
    """Symmetric error channel on the final measurement result."""
    if spec.flip_e == 0.0:
        return outcome
    return -outcome if rng.uniform() < spec.flip_e else outcome
