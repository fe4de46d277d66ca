"""Round and session orchestration for (N+1)-party single-qubit secret sharing.

One round: the distributor prepares a qubit at a random phase in
{0, pi/2, pi, 3pi/2} and sends it down the chain; every recipient adds a
random phase of her own (the last one only 0 or pi/2) and the last
measures in the x basis.  Recipients then announce only the coarse class
of their phase (X = {0, pi}, Y = {pi/2, 3pi/2}) in an order the
distributor picks at random.  A round is valid when the announced classes
make the total phase a multiple of pi, which happens in half of the
rounds; on those the outcome is perfectly (anti-)correlated with the
distributor's choice, so all recipients together (and only together) can
recover the distributor's key bit.

Sessions wrap rounds with the physical-layer gates, sift valid rounds,
sacrifice a random subset of them to estimate the error rate, and abort
when it exceeds the configured threshold.  Every random decision comes
from a stream keyed by (seed, round index), so transcripts are
reproducible and independent of execution order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .analytics import QberEstimate, SessionReport, qber_estimate
from .attacks import EveRecord, intercept_resend
from .config import SessionConfig
from .hardware import HeraldResult, coincidence_gate, flip_outcome, herald_gate
from .phases import (
    ClassLabel,
    LAST_RECIPIENT_PHASES,
    PROTOCOL_PHASES,
    Phase8,
    X_BASIS,
    apply_phase,
    bit_of_phase,
    classify,
    measure,
    prepare,
)
from .rng import COMPARE_STREAM_ID, RandomStream

DISTRIBUTOR = "distributor"
INTERMEDIATE_RECIPIENT = "intermediate_recipient"
LAST_RECIPIENT = "last_recipient"


class ReconstructionError(ValueError):
    """The pooled data solves to an odd phase: the round was garbled."""


@dataclass(frozen=True)
class RoundRecord:
    """Full transcript of one usable round."""

    round_index: int
    distributor_phase: Phase8
    recipient_phases: tuple[Phase8, ...]
    announced_classes: tuple[ClassLabel, ...]
    announcement_order: tuple[int, ...]
    outcome: int
    valid: bool
    distributor_bit: int | None
    compared: bool
    attack_active: bool

    def __post_init__(self) -> None:
        if self.announced_classes != tuple(classify(p) for p in self.recipient_phases):
            raise ValueError("announced classes must match the recipients' phases")
        if self.valid != is_valid_classes(classify(self.distributor_phase), self.announced_classes):
            raise ValueError("validity flag contradicts the announced classes")
        if (self.distributor_bit is None) == self.valid:
            raise ValueError("distributor bit must be present exactly on valid rounds")
        if sorted(self.announcement_order) != list(range(len(self.recipient_phases))):
            raise ValueError("announcement order must permute the recipient indices")


def is_valid_classes(
    distributor_class: ClassLabel, announced: Sequence[ClassLabel]
) -> bool:
    """Validity from public data only: an even number of Y-class parties.

    This is the distributor's entire sifting input; recipients' exact
    phases never enter the decision.
    """
    y_count = (distributor_class == ClassLabel.Y) + sum(c == ClassLabel.Y for c in announced)
    return y_count % 2 == 0


def choose_phase(party_kind: str, rng: RandomStream) -> Phase8:
    """Draw a party's phase: four choices, except the last recipient's two."""
    if party_kind in (DISTRIBUTOR, INTERMEDIATE_RECIPIENT):
        return PROTOCOL_PHASES[rng.below(4)]
    if party_kind == LAST_RECIPIENT:
        return LAST_RECIPIENT_PHASES[rng.below(2)]
    raise ValueError(f"unknown party kind {party_kind!r}")


def transmit_and_measure(
    d_phase: Phase8,
    r_phases: Sequence[Phase8],
    config: SessionConfig,
    rng: RandomStream,
) -> tuple[int, EveRecord | None]:
    """Run the quantum half of a round for fixed phase choices.

    The qubit starts at the distributor's phase, is intercepted at the
    configured link if an attack is active, accumulates every recipient's
    phase, and is measured in the x basis; the observed outcome then
    passes through the flip channel.
    """
    state = prepare(d_phase)
    eve = None
    for j, phi in enumerate(r_phases):
        if config.attack.intercepts_link(j):
            state, eve = intercept_resend(state, config.attack.basis_phase(), rng)
        state = apply_phase(state, phi)
    outcome = measure(state, X_BASIS, rng)
    outcome = flip_outcome(outcome, config.noise, rng)
    return outcome, eve


def run_round(config: SessionConfig, round_index: int, rng: RandomStream) -> RoundRecord:
    """Execute one full round on the given stream.

    Draw order is fixed: distributor phase, recipient phases in chain
    order, announcement order, then the channel draws (adversary and final
    measurement, plus the flip channel when enabled).
    """
    n = config.parties
    d_phase = choose_phase(DISTRIBUTOR, rng)
    r_phases = tuple(
        choose_phase(INTERMEDIATE_RECIPIENT if j < n - 1 else LAST_RECIPIENT, rng)
        for j in range(n)
    )
    order = rng.permutation(n)
    outcome, _ = transmit_and_measure(d_phase, r_phases, config, rng)

    announced = tuple(classify(p) for p in r_phases)
    valid = is_valid_classes(classify(d_phase), announced)
    return RoundRecord(
        round_index=round_index,
        distributor_phase=d_phase,
        recipient_phases=r_phases,
        announced_classes=announced,
        announcement_order=order,
        outcome=outcome,
        valid=valid,
        distributor_bit=bit_of_phase(d_phase) if valid else None,
        compared=False,
        attack_active=config.attack.active,
    )


def sift(record: RoundRecord) -> int | None:
    """The distributor's key bit for a valid round, None otherwise."""
    return bit_of_phase(record.distributor_phase) if record.valid else None


def reconstruct(outcome: int, recipient_phases: Sequence[Phase8]) -> int:
    """Recipients pool their phases and the outcome to recover the key bit.

    Solves distributor_phase = T0 - sum(phases) mod 2*pi with T0 = 0 for
    outcome +1 and pi for -1; on a noiseless valid round this is exact.
    """
    t0 = 0 if outcome == 1 else 4
    solved = (t0 - sum(p.k for p in recipient_phases)) % 8
    if solved % 2 == 1:
        raise ReconstructionError(f"solved phase {solved}*pi/4 is odd; round data is garbled")
    return bit_of_phase(Phase8(solved))


def compare_and_decide(
    valid_records: Sequence[RoundRecord],
    compare_fraction: float,
    threshold: float,
    rng: RandomStream,
) -> tuple[QberEstimate | None, bool | None, frozenset[int]]:
    """Sacrifice a uniform subset of valid rounds to estimate the error rate.

    Returns the estimate (None when nothing was compared), the abort
    verdict (None when undecidable), and the compared round indices.
    """
    if not 0.0 <= compare_fraction <= 1.0:
        raise ValueError(f"compare_fraction must be in [0, 1], got {compare_fraction}")
    n = len(valid_records)
    k = int(compare_fraction * n + 0.5)
    positions = list(range(n))
    for i in range(k):  # partial Fisher-Yates: first k entries are a uniform subset
        j = i + rng.below(n - i) if n - i > 1 else i
        positions[i], positions[j] = positions[j], positions[i]
    chosen = [valid_records[p] for p in positions[:k]]
    errors = sum(
        reconstruct(rec.outcome, rec.recipient_phases) != rec.distributor_bit for rec in chosen
    )
    estimate = qber_estimate(errors, k)
    abort = None if estimate is None else estimate.q > threshold
    return estimate, abort, frozenset(rec.round_index for rec in chosen)


def _round_task(config: SessionConfig, round_index: int) -> tuple[HeraldResult, RoundRecord | None]:
    rng = RandomStream.for_round(config.seed, round_index)
    herald = herald_gate(config.noise, rng)
    if herald is not HeraldResult.HERALDED:
        return herald, None
    if not coincidence_gate(config.noise, rng):
        return herald, None
    return herald, run_round(config, round_index, rng)


def run_session(
    config: SessionConfig, workers: int = 1
) -> tuple[SessionReport, list[RoundRecord]]:
    """Run a full session; the result is a pure function of (config, seed).

    Rounds may execute on several workers: each owns its derived stream,
    and aggregation happens in round order, so the transcript is identical
    to a serial run.
    """
    indices: Iterable[int] = range(config.rounds)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda i: _round_task(config, i), indices, chunksize=256))
    else:
        results = [_round_task(config, i) for i in indices]

    z_one = sum(herald is HeraldResult.HERALDED for herald, _ in results)
    records = [rec for _, rec in results if rec is not None]
    valid_records = [rec for rec in records if rec.valid]

    estimate, abort, compared_ids = compare_and_decide(
        valid_records,
        config.compare_fraction,
        config.abort_threshold,
        RandomStream(config.seed, COMPARE_STREAM_ID),
    )
    if compared_ids:
        records = [
            replace(rec, compared=True) if rec.round_index in compared_ids else rec
            for rec in records
        ]
    key_bits = "".join(
        str(rec.distributor_bit)
        for rec in records
        if rec.valid and rec.round_index not in compared_ids
    )
    report = SessionReport(
        z_total=config.rounds,
        z_one=z_one,
        z_raw=len(records),
        z_val=len(valid_records),
        qber=estimate,
        key_bits=key_bits,
        abort={True: "yes", False: "no", None: "undecided"}[abort],
        config_echo=config,
    )
    return report, records
