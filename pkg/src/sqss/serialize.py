"""Bit-exact report and transcript serialization.

Given equal (config, seed) the emitted JSON and CSV bytes are identical
across runs and across serial versus parallel execution; nothing here
depends on wall clock, locale or dict iteration quirks.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Mapping, Sequence

from .analytics import SessionReport
from .config import ConfigError, SessionConfig, attack_to_string, parse_attack_string
from .hardware import NoiseSpec
from .protocol import RoundRecord

TRANSCRIPT_COLUMNS = (
    "round_index",
    "distributor_phase",
    "recipient_phases",
    "announced_classes",
    "announcement_order",
    "outcome",
    "valid",
    "distributor_bit",
    "compared",
    "attack_active",
)

_CONFIG_KEYS = (
    "parties",
    "rounds",
    "seed",
    "attack",
    "herald_mu",
    "coinc_eta",
    "flip_e",
    "compare_fraction",
    "abort_threshold",
    "format",
)


def config_to_dict(config: SessionConfig) -> dict:
    return {
        "parties": config.parties,
        "rounds": config.rounds,
        "seed": config.seed,
        "attack": attack_to_string(config.attack),
        "herald_mu": config.noise.herald_mu,
        "coinc_eta": config.noise.coincidence_eta,
        "flip_e": config.noise.flip_e,
        "compare_fraction": config.compare_fraction,
        "abort_threshold": config.abort_threshold,
        "format": config.output_format,
    }


def config_from_dict(data: Mapping) -> SessionConfig:
    unknown = set(data) - set(_CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"config: unknown keys {sorted(unknown)}")
    base = config_to_dict(SessionConfig())
    merged = {**base, **data}
    try:
        noise = NoiseSpec(
            herald_mu=float(merged["herald_mu"]),
            coincidence_eta=float(merged["coinc_eta"]),
            flip_e=float(merged["flip_e"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return SessionConfig(
        parties=int(merged["parties"]),
        rounds=int(merged["rounds"]),
        seed=int(merged["seed"]),
        attack=parse_attack_string(str(merged["attack"])),
        noise=noise,
        compare_fraction=float(merged["compare_fraction"]),
        abort_threshold=float(merged["abort_threshold"]),
        output_format=str(merged["format"]),
    )


def bits_to_hex(bits: str) -> str:
    """Pack an MSB-first bit string into hex, zero-padded to a nibble."""
    if not bits:
        return ""
    padded = bits + "0" * (-len(bits) % 4)
    return f"{int(padded, 2):0{len(padded) // 4}x}"


def report_to_json_bytes(report: SessionReport) -> bytes:
    qber = None
    if report.qber is not None:
        qber = {"q": report.qber.q, "stderr": report.qber.stderr, "n": report.qber.n}
    payload = {
        "config": config_to_dict(report.config_echo),
        "z_total": report.z_total,
        "z_one": report.z_one,
        "z_raw": report.z_raw,
        "z_val": report.z_val,
        "qber": qber,
        "key_hex": {"n_bits": len(report.key_bits), "hex": bits_to_hex(report.key_bits)},
        "abort": report.abort,
    }
    return (json.dumps(payload, indent=2) + "\n").encode("utf-8")


def _record_row(rec: RoundRecord) -> list[str]:
    return [
        str(rec.round_index),
        str(rec.distributor_phase.k),
        "-".join(str(p.k) for p in rec.recipient_phases),
        "".join(c.value for c in rec.announced_classes),
        "-".join(str(i) for i in rec.announcement_order),
        str(rec.outcome),
        "1" if rec.valid else "0",
        "" if rec.distributor_bit is None else str(rec.distributor_bit),
        "1" if rec.compared else "0",
        "1" if rec.attack_active else "0",
    ]


def transcript_to_csv_bytes(records: Sequence[RoundRecord]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRANSCRIPT_COLUMNS)
    for rec in records:
        writer.writerow(_record_row(rec))
    return buf.getvalue().encode("utf-8")
