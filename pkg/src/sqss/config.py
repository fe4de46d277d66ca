"""Session configuration: defaults, validation, attack-string parsing."""

from __future__ import annotations

from dataclasses import dataclass, field

from .attacks import NO_ATTACK, AttackSpec
from .hardware import NoiseSpec

DEFAULT_PARTIES = 5
DEFAULT_ROUNDS = 25000
DEFAULT_SEED = 1
DEFAULT_COMPARE_FRACTION = 0.5
# well above the expected hardware error rate and well below the 25%
# floor any intercept-resend strategy forces
DEFAULT_ABORT_THRESHOLD = 0.11


class ConfigError(ValueError):
    """A session parameter is out of range; the message names the field."""


def parse_attack_string(text: str) -> AttackSpec:
    """Parse ``none`` or ``<basis>:<link>`` with basis in {x, y, breidbart}."""
    text = text.strip()
    if text == "none":
        return NO_ATTACK
    basis, sep, link_text = text.partition(":")
    if not sep:
        raise ConfigError(f"attack: expected 'none' or '<basis>:<link>', got {text!r}")
    try:
        link = int(link_text)
    except ValueError:
        raise ConfigError(f"attack: link must be an integer, got {link_text!r}") from None
    try:
        return AttackSpec.intercept(basis, link)
    except ValueError as exc:
        raise ConfigError(f"attack: {exc}") from None


def attack_to_string(attack: AttackSpec) -> str:
    if not attack.active:
        return "none"
    return f"{attack.basis}:{attack.link}"


@dataclass(frozen=True)
class SessionConfig:
    """Everything that determines a session; with the seed it fixes the transcript."""

    parties: int = DEFAULT_PARTIES  # recipient count N
    rounds: int = DEFAULT_ROUNDS
    seed: int = DEFAULT_SEED
    attack: AttackSpec = NO_ATTACK
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    compare_fraction: float = DEFAULT_COMPARE_FRACTION
    abort_threshold: float = DEFAULT_ABORT_THRESHOLD
    output_format: str = "json"

    def __post_init__(self) -> None:
        if self.parties < 2:
            raise ConfigError(f"parties: need at least 2 recipients, got {self.parties}")
        if self.rounds < 0:
            raise ConfigError(f"rounds: must be >= 0, got {self.rounds}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed: must fit in 64 unsigned bits, got {self.seed}")
        if not 0.0 <= self.compare_fraction <= 1.0:
            raise ConfigError(
                f"compare_fraction: must be in [0, 1], got {self.compare_fraction}"
            )
        if not 0.0 <= self.abort_threshold <= 1.0:
            raise ConfigError(f"abort_threshold: must be in [0, 1], got {self.abort_threshold}")
        if self.attack.active and not 0 <= self.attack.link < self.parties:
            raise ConfigError(
                f"attack: link {self.attack.link} out of range for {self.parties} recipients"
            )
        if self.output_format not in ("json", "csv"):
            raise ConfigError(f"format: must be json or csv, got {self.output_format!r}")
