"""Exact arithmetic over rationals extended by sqrt(2).

Every probability and correlation the protocol can produce lives in the
field Q(sqrt2), because all phases are integer multiples of pi/4 and
cos(k*pi/4) is either 0, +-1 or +-sqrt(2)/2.  Representing values as
p + q*sqrt(2) with Fraction coefficients keeps sifting decisions,
attack-error rates and the enumeration oracle free of floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ExactValue:
    """The real number p + q*sqrt(2) with exact rational coefficients."""

    p: Fraction
    q: Fraction

    @staticmethod
    def of(p: int | Fraction, q: int | Fraction = 0) -> "ExactValue":
        return ExactValue(Fraction(p), Fraction(q))

    def __add__(self, other: "ExactValue") -> "ExactValue":
        return ExactValue(self.p + other.p, self.q + other.q)

    def __sub__(self, other: "ExactValue") -> "ExactValue":
        return ExactValue(self.p - other.p, self.q - other.q)

    def __neg__(self) -> "ExactValue":
        return ExactValue(-self.p, -self.q)

    def __mul__(self, other: "ExactValue") -> "ExactValue":
        # (p1 + q1*r)(p2 + q2*r) with r^2 = 2
        return ExactValue(
            self.p * other.p + 2 * self.q * other.q,
            self.p * other.q + self.q * other.p,
        )

    def __truediv__(self, other: "ExactValue") -> "ExactValue":
        # multiply by the conjugate; norm = p^2 - 2 q^2 is nonzero for
        # nonzero elements because sqrt(2) is irrational
        norm = other.p * other.p - 2 * other.q * other.q
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        conj = ExactValue(other.p, -other.q)
        num = self * conj
        return ExactValue(num.p / norm, num.q / norm)

    def scaled(self, r: int | Fraction) -> "ExactValue":
        r = Fraction(r)
        return ExactValue(self.p * r, self.q * r)

    def sign(self) -> int:
        """Exact sign: -1, 0 or +1."""
        if self.q == 0:
            return (self.p > 0) - (self.p < 0)
        if self.p == 0:
            return 1 if self.q > 0 else -1
        if self.p > 0 and self.q > 0:
            return 1
        if self.p < 0 and self.q < 0:
            return -1
        # mixed signs: compare p^2 against 2 q^2
        bigger_rational = self.p * self.p > 2 * self.q * self.q
        if self.p > 0:
            return 1 if bigger_rational else -1
        return -1 if bigger_rational else 1

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def __lt__(self, other: "ExactValue") -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: "ExactValue") -> bool:
        return (self - other).sign() <= 0

    def __float__(self) -> float:
        return float(self.p) + float(self.q) * _SQRT2

    def __str__(self) -> str:
        return format_exact(self)


ZERO = ExactValue.of(0)
ONE = ExactValue.of(1)
HALF = ExactValue.of(Fraction(1, 2))

# cos(k*pi/4) for k = 0..7; the only trigonometry the protocol needs
_COS_TABLE = (
    ExactValue.of(1),
    ExactValue.of(0, Fraction(1, 2)),
    ExactValue.of(0),
    ExactValue.of(0, Fraction(-1, 2)),
    ExactValue.of(-1),
    ExactValue.of(0, Fraction(-1, 2)),
    ExactValue.of(0),
    ExactValue.of(0, Fraction(1, 2)),
)


def exact_cos(k: int) -> ExactValue:
    """cos(k * pi/4), exactly."""
    return _COS_TABLE[k % 8]


# (a, b) pairs of the five reachable detection probabilities (a + b*sqrt2)/4,
# indexed by phase difference k: (1 + cos(k*pi/4)) / 2
_PROB_TABLE = {
    0: (4, 0),
    1: (2, 1),
    2: (2, 0),
    3: (2, -1),
    4: (0, 0),
    5: (2, -1),
    6: (2, 0),
    7: (2, 1),
}

_ALLOWED_PROB_PAIRS = frozenset({(0, 0), (2, -1), (2, 0), (2, 1), (4, 0)})


@dataclass(frozen=True)
class ExactProb:
    """A detection probability (a + b*sqrt(2))/4.

    Closed five-valued set: {0, (2-sqrt2)/4, 1/2, (2+sqrt2)/4, 1}.  These
    are the only probabilities a projective measurement of an equatorial
    state in an eighth-turn basis can yield.
    """

    a: int
    b: int

    def __post_init__(self) -> None:
        if (self.a, self.b) not in _ALLOWED_PROB_PAIRS:
            raise ValueError(f"({self.a}, {self.b}) is not a reachable probability")

    @staticmethod
    def from_phase_diff(k: int) -> "ExactProb":
        """(1 + cos(k*pi/4)) / 2 for an integer quarter-phase difference k."""
        a, b = _PROB_TABLE[k % 8]
        return ExactProb(a, b)

    def complement(self) -> "ExactProb":
        return ExactProb(4 - self.a, -self.b)

    def value(self) -> ExactValue:
        return ExactValue(Fraction(self.a, 4), Fraction(self.b, 4))

    def __float__(self) -> float:
        return (self.a + self.b * _SQRT2) / 4.0


def format_exact(v: ExactValue) -> str:
    """Render p + q*sqrt(2) as a compact exact string, e.g. ``(2 + sqrt2)/4``."""
    if v.q == 0:
        return str(v.p)
    if v.p == 0:
        num = v.q.numerator
        coeff = "" if abs(num) == 1 else str(abs(num)) + "*"
        s = f"{coeff}sqrt2/{v.q.denominator}" if v.q.denominator != 1 else f"{coeff}sqrt2"
        return ("-" if num < 0 else "") + s
    den = math.lcm(v.p.denominator, v.q.denominator)
    a = v.p.numerator * (den // v.p.denominator)
    b = v.q.numerator * (den // v.q.denominator)
    b_term = "sqrt2" if abs(b) == 1 else f"{abs(b)}*sqrt2"
    joined = f"{a} + {b_term}" if b > 0 else f"{a} - {b_term}"
    return f"({joined})/{den}" if den != 1 else f"({joined})"
