"""Command-line entry point.

Two modes share one flag set:

  sqss [flags]                 run a seeded session, print the JSON report
                               (or the CSV transcript with --format csv)
  sqss --oracle QUERY [flags]  answer an exact enumeration query instead of
                               sampling; values print symbolically and in
                               decimal

Exit codes: 0 success, 2 configuration error, 3 oracle budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analytics import (
    ORACLE_MAX_RECIPIENTS,
    OracleBudgetError,
    brute_force_oracle,
    oracle_subset_distributions,
)
from .config import ConfigError, SessionConfig, parse_attack_string
from .exact import ExactValue, format_exact
from .hardware import NoiseSpec
from .protocol import run_session
from .serialize import config_from_dict, report_to_json_bytes, transcript_to_csv_bytes

EXIT_CONFIG_ERROR = 2
EXIT_ORACLE_BUDGET = 3

ORACLE_QUERIES = ("valid-fraction", "qber", "reconstruction", "subset", "info", "equivalence")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqss",
        description="Simulator and exact oracle for sequential single-qubit secret sharing.",
    )
    parser.add_argument("--parties", type=int, default=None, help="recipient count N (default 5)")
    parser.add_argument("--rounds", type=int, default=None, help="protocol repetitions (default 25000)")
    parser.add_argument("--seed", type=int, default=None, help="64-bit master seed (default 1)")
    parser.add_argument(
        "--attack",
        default=None,
        metavar="{x|y|breidbart}:<link> | none",
        help="intercept-resend attack placement (default none)",
    )
    parser.add_argument("--herald-mu", type=float, default=None, help="mean trigger photons per window")
    parser.add_argument("--coinc-eta", type=float, default=None, help="coincidence probability given one herald")
    parser.add_argument("--flip-e", type=float, default=None, help="final-outcome flip probability")
    parser.add_argument("--compare-fraction", type=float, default=None, help="share of valid rounds sacrificed")
    parser.add_argument("--abort-threshold", type=float, default=None, help="abort when QBER exceeds this")
    parser.add_argument("--format", choices=("json", "csv"), default=None, help="report (json) or transcript (csv)")
    parser.add_argument("--config", default=None, metavar="FILE", help="JSON config file (same schema as the report's config echo)")
    parser.add_argument("--oracle", choices=ORACLE_QUERIES, default=None, help="print an exact enumeration answer instead of running a session")
    return parser


def config_from_args(args: argparse.Namespace) -> SessionConfig:
    data: dict = {}
    if args.config is not None:
        with open(args.config, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise ConfigError("config: file must hold a JSON object")
        data.update(loaded)
    overrides = {
        "parties": args.parties,
        "rounds": args.rounds,
        "seed": args.seed,
        "attack": args.attack,
        "herald_mu": args.herald_mu,
        "coinc_eta": args.coinc_eta,
        "flip_e": args.flip_e,
        "compare_fraction": args.compare_fraction,
        "abort_threshold": args.abort_threshold,
        "format": args.format,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    return config_from_dict(data)


def _print_exact(label: str, value: ExactValue) -> None:
    print(f"{label} = {format_exact(value)} = {float(value):.10g}")


def run_oracle(query: str, config: SessionConfig) -> None:
    n = config.parties
    if n > ORACLE_MAX_RECIPIENTS:
        raise OracleBudgetError(
            f"oracle queries support at most {ORACLE_MAX_RECIPIENTS} recipients, got {n}"
        )
    if query == "valid-fraction":
        _print_exact("valid-fraction", brute_force_oracle(n, config.attack, query))
    elif query == "qber":
        _print_exact(f"qber[{_attack_label(config)}]", brute_force_oracle(n, config.attack, query))
    elif query == "reconstruction":
        _print_exact("reconstruction-correct-fraction", brute_force_oracle(n, config.attack, query))
    elif query == "subset":
        uniform = brute_force_oracle(n, config.attack, query)
        for size in range(n):
            dists = oracle_subset_distributions(n, frozenset(range(size)))
            sample = next(iter(dists.values()))
            print(
                f"subset size {size}: bit distribution "
                f"({format_exact(sample[0])}, {format_exact(sample[1])}) over {len(dists)} views"
            )
        print(f"uniform: {'true' if uniform else 'false'}")
    elif query == "info":
        bits = brute_force_oracle(n, config.attack, query)
        print(f"info[{_attack_label(config)}] = {bits:.10g} bits per valid round")
    elif query == "equivalence":
        equal = brute_force_oracle(n, config.attack, query, max_n=min(n, 4))
        print(f"equal: {'true' if equal else 'false'}")


def _attack_label(config: SessionConfig) -> str:
    if not config.attack.active:
        return "no attack"
    return f"{config.attack.basis}@{config.attack.link}"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"sqss: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    if args.oracle is not None:
        try:
            run_oracle(args.oracle, config)
        except OracleBudgetError as exc:
            print(f"sqss: {exc}", file=sys.stderr)
            return EXIT_ORACLE_BUDGET
        return 0

    report, records = run_session(config)
    if config.output_format == "csv":
        payload = transcript_to_csv_bytes(records)
    else:
        payload = report_to_json_bytes(report)
    sys.stdout.buffer.write(payload)
    sys.stdout.buffer.flush()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
