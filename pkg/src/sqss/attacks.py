"""Intercept-resend attacks on the qubit channel.

The adversary (an outside eavesdropper, or equivalently a dishonest first
recipient acting before applying her own phase) measures the in-flight
qubit at one link and forwards the eigenstate she observed.  Measuring in
a protocol basis leaves half the rounds untouched and randomizes the rest;
the intermediate basis disturbs every round a little.  Either way the
error rate on valid rounds is exactly 1/4.
"""

from __future__ import annotations

from dataclasses import dataclass

from .phases import BREIDBART_PHASE, EquatorState, Outcome, Phase8, X_BASIS, Y_BASIS, measure
from .rng import RandomStream

_BASIS_PHASES = {"x": X_BASIS, "y": Y_BASIS, "breidbart": BREIDBART_PHASE}


@dataclass(frozen=True)
class AttackSpec:
    """Strategy, measurement basis and link placement of the adversary.

    Link 0 sits between the distributor and the first recipient; link j
    intercepts the qubit just before recipient j+1 acts.
    """

    kind: str = "none"  # "none" | "intercept_resend"
    basis: str | None = None  # "x" | "y" | "breidbart"
    link: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("none", "intercept_resend"):
            raise ValueError(f"unknown attack kind {self.kind!r}")
        if self.kind == "none":
            if self.basis is not None or self.link is not None:
                raise ValueError("attack 'none' takes no basis or link")
        else:
            if self.basis not in _BASIS_PHASES:
                raise ValueError(f"attack basis must be one of x, y, breidbart; got {self.basis!r}")
            if self.link is None or self.link < 0:
                raise ValueError(f"attack link must be a non-negative integer, got {self.link!r}")

    @staticmethod
    def none() -> "AttackSpec":
        return AttackSpec()

    @staticmethod
    def intercept(basis: str, link: int) -> "AttackSpec":
        return AttackSpec(kind="intercept_resend", basis=basis, link=link)

    @property
    def active(self) -> bool:
        return self.kind != "none"

    def basis_phase(self) -> Phase8:
        if not self.active:
            raise ValueError("no basis for attack 'none'")
        return _BASIS_PHASES[self.basis]

    def intercepts_link(self, link: int) -> bool:
        return self.active and self.link == link


NO_ATTACK = AttackSpec.none()


@dataclass(frozen=True)
class EveRecord:
    """What the adversary measured and what she put back on the channel."""

    measured_basis: Phase8
    eve_outcome: Outcome
    resent_phase: Phase8

    def __post_init__(self) -> None:
        expected = self.measured_basis if self.eve_outcome == 1 else self.measured_basis + Phase8(4)
        if self.resent_phase != expected:
            raise ValueError("resent phase must be the measured eigenstate")


def intercept_resend(
    s: EquatorState, basis: Phase8, rng: RandomStream
) -> tuple[EquatorState, EveRecord]:
    """Measure ``s`` in ``basis`` and forward the observed eigenstate."""
    outcome = measure(s, basis, rng)
    resent = basis if outcome == 1 else basis + Phase8(4)
    return EquatorState(resent), EveRecord(basis, outcome, resent)


def attack_qber_exact(basis: str, n_recipients: int, link: int = 0):
    """Exact error rate on valid runs under an intercept-resend attack.

    Enumerates every phase assignment and adversary outcome with exact
    probabilities; equals 1/4 for every basis and link.
    """
    from .analytics import oracle_qber  # deferred: analytics imports this module

    return oracle_qber(n_recipients, AttackSpec.intercept(basis, link))


def attack_information_exact(basis: str, n_recipients: int, link: int = 0) -> float:
    """Adversary's exact mutual information (bits) with the key bit.

    Conditioned on valid runs and everything public (announced classes).
    """
    from .analytics import oracle_information

    return oracle_information(n_recipients, AttackSpec.intercept(basis, link))
