"""Estimators, session reports and the exact brute-force oracle.

The oracle enumerates every phase assignment, adversary outcome and final
measurement outcome with exact Q(sqrt2) weights.  It never samples and
never touches floating point until a caller asks for entropies, so it
serves as ground truth for the Monte Carlo engine: valid-run fraction,
attack error rates, reconstruction correctness and the uniformity of the
key bit conditioned on any proper subset of recipients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Callable, Iterator, Sequence

from .attacks import NO_ATTACK, AttackSpec
from .exact import ExactProb, ExactValue, ONE, ZERO
from .phases import ClassLabel, Phase8, PROTOCOL_PHASES, LAST_RECIPIENT_PHASES, bit_of_phase, classify

if TYPE_CHECKING:
    from .config import SessionConfig

ORACLE_MAX_RECIPIENTS = 5


class OracleBudgetError(ValueError):
    """Raised when an enumeration query exceeds the supported party count."""


@dataclass(frozen=True)
class QberEstimate:
    """Error fraction with its binomial standard error."""

    q: float
    stderr: float
    n: int


def qber_estimate(errors: int, n: int) -> QberEstimate | None:
    """q = errors/n with stderr sqrt(q(1-q)/n); None when nothing was compared."""
    if errors < 0 or n < 0 or errors > n:
        raise ValueError(f"need 0 <= errors <= n, got errors={errors}, n={n}")
    if n == 0:
        return None
    q = errors / n
    return QberEstimate(q=q, stderr=math.sqrt(q * (1.0 - q) / n), n=n)


@dataclass(frozen=True)
class SessionReport:
    """Aggregate of one session: count chain, error estimate, key, verdict."""

    z_total: int
    z_one: int
    z_raw: int
    z_val: int
    qber: QberEstimate | None
    key_bits: str
    abort: str  # "yes" | "no" | "undecided"
    config_echo: "SessionConfig"


def expectation_A(phases: Sequence[Phase8]) -> ExactValue:
    """Expected final +-1 outcome after accumulating ``phases``: p+ - p-.

    Equals cos(sum * pi/4) exactly, which is what makes the sequential
    single-qubit protocol interchangeable with the entangled-state one.
    """
    total = sum(p.k for p in phases) % 8
    plus = ExactProb.from_phase_diff(total)
    return plus.value() - plus.complement().value()


@dataclass(frozen=True)
class Branch:
    """One exhaustively enumerated protocol history and its exact weight."""

    d_phase: Phase8
    r_phases: tuple[Phase8, ...]
    eve_outcome: int | None
    outcome: int
    weight: ExactValue

    @property
    def valid(self) -> bool:
        total = (self.d_phase.k + sum(p.k for p in self.r_phases)) % 4
        return total == 0

    @property
    def d_bit(self) -> int:
        return bit_of_phase(self.d_phase)

    @property
    def expected_outcome(self) -> int:
        """Noiseless outcome implied by the chosen phases (valid rounds only)."""
        total = (self.d_phase.k + sum(p.k for p in self.r_phases)) % 8
        if total == 0:
            return 1
        if total == 4:
            return -1
        raise ValueError("expected outcome is defined only for valid rounds")

    @property
    def classes(self) -> tuple[ClassLabel, ...]:
        return tuple(classify(p) for p in self.r_phases)


def _phase_choices(n_recipients: int) -> Iterator[tuple[Phase8, tuple[Phase8, ...], Fraction]]:
    """All (distributor, recipients) assignments with their prior weight."""
    prior_d = Fraction(1, 4)
    prior_mid = Fraction(1, 4)
    prior_last = Fraction(1, 2)

    def rec(prefix: tuple[Phase8, ...], weight: Fraction) -> Iterator[tuple[tuple[Phase8, ...], Fraction]]:
        j = len(prefix)
        if j == n_recipients:
            yield prefix, weight
            return
        last = j == n_recipients - 1
        pool = LAST_RECIPIENT_PHASES if last else PROTOCOL_PHASES
        w = prior_last if last else prior_mid
        for p in pool:
            yield from rec(prefix + (p,), weight * w)

    for d in PROTOCOL_PHASES:
        for r_phases, w in rec((), prior_d):
            yield d, r_phases, w


def enumerate_branches(n_recipients: int, attack: AttackSpec = NO_ATTACK) -> Iterator[Branch]:
    """Yield every protocol history with nonzero exact probability.

    Mirrors the physics from first principles (phase accumulation plus the
    Born rule at the adversary's measurement and the final one); it does not
    call into the sampled round pipeline.
    """
    if not 2 <= n_recipients <= ORACLE_MAX_RECIPIENTS:
        raise OracleBudgetError(
            f"enumeration supports 2..{ORACLE_MAX_RECIPIENTS} recipients, got {n_recipients}"
        )
    if attack.active and not 0 <= attack.link < n_recipients:
        raise ValueError(f"attack link {attack.link} out of range for {n_recipients} recipients")

    for d_phase, r_phases, prior in _phase_choices(n_recipients):
        base = ExactValue.of(prior)
        # branch on the adversary's outcome where she intercepts
        eve_branches: list[tuple[int | None, Phase8 | None, ExactValue]] = [(None, None, base)]
        if attack.active:
            acc = d_phase
            for p in r_phases[: attack.link]:
                acc = acc + p
            basis = attack.basis_phase()
            p_plus = ExactProb.from_phase_diff((acc - basis).k).value()
            eve_branches = []
            for eve_outcome, resent, prob in (
                (1, basis, p_plus),
                (-1, basis + Phase8(4), ONE - p_plus),
            ):
                if not prob.is_zero():
                    eve_branches.append((eve_outcome, resent, base * prob))

        for eve_outcome, resent, weight in eve_branches:
            # channel phase after every party acted
            if resent is None:
                channel = d_phase
                tail = r_phases
            else:
                channel = resent
                tail = r_phases[attack.link :]
            for p in tail:
                channel = channel + p
            p_plus_final = ExactProb.from_phase_diff(channel.k).value()
            for outcome, prob in ((1, p_plus_final), (-1, ONE - p_plus_final)):
                if prob.is_zero():
                    continue
                yield Branch(d_phase, r_phases, eve_outcome, outcome, weight * prob)


def oracle_valid_fraction(n_recipients: int) -> ExactValue:
    """Exact probability that a round is valid (phase sum a multiple of pi)."""
    total = ZERO
    for br in enumerate_branches(n_recipients):
        if br.valid:
            total = total + br.weight
    return total


def oracle_qber(n_recipients: int, attack: AttackSpec) -> ExactValue:
    """Exact error rate among valid rounds under ``attack`` (no flip noise)."""
    valid = ZERO
    errors = ZERO
    for br in enumerate_branches(n_recipients, attack):
        if not br.valid:
            continue
        valid = valid + br.weight
        if br.outcome != br.expected_outcome:
            errors = errors + br.weight
    return errors / valid


def oracle_reconstruction_fraction(
    n_recipients: int,
    reconstruct_fn: Callable[[int, tuple[Phase8, ...]], int],
) -> ExactValue:
    """Exact fraction of valid noiseless rounds that ``reconstruct_fn`` decodes.

    The expected bit comes straight from the distributor phase, so the
    callable under test is exercised against an independent reference.
    """
    valid = ZERO
    correct = ZERO
    for br in enumerate_branches(n_recipients):
        if not br.valid:
            continue
        valid = valid + br.weight
        if reconstruct_fn(br.outcome, br.r_phases) == br.d_bit:
            correct = correct + br.weight
    return correct / valid


def oracle_subset_distributions(
    n_recipients: int, known: frozenset[int]
) -> dict[tuple, tuple[ExactValue, ExactValue]]:
    """Conditional key-bit distribution per public view, phases of ``known`` leaked.

    The view is everything an incomplete coalition holds: all announced
    classes, the validity verdict, the final outcome, and the exact phases
    of the recipients in ``known``.  Returns P(bit=0), P(bit=1) for every
    view with nonzero probability.
    """
    if not known < set(range(n_recipients)):
        raise ValueError("known must be a proper subset of recipient indices")
    cells: dict[tuple, list[ExactValue]] = {}
    for br in enumerate_branches(n_recipients):
        key = (
            br.classes,
            br.valid,
            br.outcome,
            tuple(sorted((j, br.r_phases[j].k) for j in known)),
        )
        pair = cells.setdefault(key, [ZERO, ZERO])
        pair[br.d_bit] = pair[br.d_bit] + br.weight
    out: dict[tuple, tuple[ExactValue, ExactValue]] = {}
    for key, (w0, w1) in cells.items():
        total = w0 + w1
        out[key] = (w0 / total, w1 / total)
    return out


def oracle_subset_uniform(n_recipients: int) -> bool:
    """True iff every proper coalition's conditional bit distribution is (1/2, 1/2)."""
    indices = range(n_recipients)
    for mask in range(2**n_recipients - 1):  # all proper subsets, empty included
        known = frozenset(j for j in indices if mask >> j & 1)
        for p0, p1 in oracle_subset_distributions(n_recipients, known).values():
            if p0 != p1:
                return False
    return True


def oracle_information(n_recipients: int, attack: AttackSpec) -> float:
    """Mutual information (bits) between the adversary's outcome and the key bit.

    Conditioned on the public record (announced classes) and restricted to
    valid rounds.  Probabilities are exact; only the final logarithms are
    floating point.
    """
    if not attack.active:
        return 0.0
    # joint weights over (classes, eve outcome, bit), valid rounds only
    joint: dict[tuple, dict[tuple[int, int], ExactValue]] = {}
    for br in enumerate_branches(n_recipients, attack):
        if not br.valid:
            continue
        cell = joint.setdefault(br.classes, {})
        key = (br.eve_outcome, br.d_bit)
        cell[key] = cell.get(key, ZERO) + br.weight

    info = 0.0
    total_valid = ZERO
    for cell in joint.values():
        for w in cell.values():
            total_valid = total_valid + w
    for cell in joint.values():
        cell_w = ZERO
        for w in cell.values():
            cell_w = cell_w + w
        p_eve: dict[int, ExactValue] = {}
        p_bit: dict[int, ExactValue] = {}
        for (e, b), w in cell.items():
            p_eve[e] = p_eve.get(e, ZERO) + w
            p_bit[b] = p_bit.get(b, ZERO) + w
        for (e, b), w in cell.items():
            ratio = float(w * cell_w / (p_eve[e] * p_bit[b]))
            info += float(w / total_valid) * math.log2(ratio)
    return info


def brute_force_oracle(n_recipients: int, attack: AttackSpec, query: str, **kwargs):
    """Named-query front end used by the command line.

    Queries: valid-fraction, qber, reconstruction, subset, info, equivalence.
    """
    if query == "valid-fraction":
        return oracle_valid_fraction(n_recipients)
    if query == "qber":
        return oracle_qber(n_recipients, attack)
    if query == "reconstruction":
        from .protocol import reconstruct  # deferred; protocol imports this module

        fn = kwargs.get("reconstruct_fn", reconstruct)
        return oracle_reconstruction_fraction(n_recipients, fn)
    if query == "subset":
        return oracle_subset_uniform(n_recipients)
    if query == "info":
        return oracle_information(n_recipients, attack)
    if query == "equivalence":
        from .ghz import equivalence_check  # deferred; ghz imports this module

        return equivalence_check(kwargs.get("max_n", n_recipients))
    raise ValueError(f"unknown oracle query {query!r}")
