"""Equatorial qubit kernel: phases in units of pi/4, states, measurement.

A protocol qubit is always (|0> + e^{i*phi}|1>)/sqrt(2); global phase is
ignored, so a state is just its relative phase.  Phases are integers mod 8
(units of pi/4), never floats: honest parties use the even values
{0, 2, 4, 6} <-> {0, pi/2, pi, 3pi/2}, an eavesdropper's intermediate
basis uses the odd values {1, 5}.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .exact import ExactProb
from .rng import RandomStream

Outcome = int  # +1 or -1


@dataclass(frozen=True)
class Phase8:
    """A phase angle k * pi/4 with k in [0, 8); arithmetic is mod 8."""

    k: int

    def __post_init__(self) -> None:
        if not 0 <= self.k < 8:
            raise ValueError(f"phase index {self.k} outside [0, 8)")

    def __add__(self, other: "Phase8") -> "Phase8":
        return Phase8((self.k + other.k) % 8)

    def __sub__(self, other: "Phase8") -> "Phase8":
        return Phase8((self.k - other.k) % 8)

    def is_protocol_phase(self) -> bool:
        return self.k % 2 == 0


PROTOCOL_PHASES = (Phase8(0), Phase8(2), Phase8(4), Phase8(6))
LAST_RECIPIENT_PHASES = (Phase8(0), Phase8(2))
BREIDBART_PHASE = Phase8(1)
X_BASIS = Phase8(0)
Y_BASIS = Phase8(2)


@dataclass(frozen=True)
class EquatorState:
    """(|0> + e^{i*phase}|1>)/sqrt(2), fully specified by its phase."""

    phase: Phase8


def prepare(phase_d: Phase8) -> EquatorState:
    """Prepare a fresh qubit with relative phase ``phase_d``."""
    return EquatorState(phase_d)


def apply_phase(s: EquatorState, phi: Phase8) -> EquatorState:
    """The unitary |0> -> |0>, |1> -> e^{i*phi}|1>; phases simply add."""
    return EquatorState(s.phase + phi)


def prob_plus(s: EquatorState, basis: Phase8) -> ExactProb:
    """Probability of the +1 outcome when measuring ``s`` in ``basis``.

    Exactly (1 + cos((s.phase - basis) * pi/4)) / 2; depends only on the
    phase difference.
    """
    return ExactProb.from_phase_diff((s.phase - basis).k)


def prob_minus(s: EquatorState, basis: Phase8) -> ExactProb:
    return prob_plus(s, basis).complement()


def measure(s: EquatorState, basis: Phase8, rng: RandomStream) -> Outcome:
    """Projective measurement; consumes exactly one uniform draw."""
    return 1 if rng.uniform() < float(prob_plus(s, basis)) else -1


class ClassLabel(Enum):
    """Public coarse-graining of a protocol phase: X = {0, pi}, Y = {pi/2, 3pi/2}."""

    X = "X"
    Y = "Y"


def classify(phase: Phase8) -> ClassLabel:
    if not phase.is_protocol_phase():
        raise ValueError(f"phase {phase.k}*pi/4 has no class; only even phases do")
    return ClassLabel.X if phase.k in (0, 4) else ClassLabel.Y


def bit_of_phase(phase: Phase8) -> int:
    """Key-bit convention: phases {0, pi/2} encode 0, {pi, 3pi/2} encode 1."""
    if not phase.is_protocol_phase():
        raise ValueError(f"phase {phase.k}*pi/4 carries no key bit")
    return 0 if phase.k in (0, 2) else 1
