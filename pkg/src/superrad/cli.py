"""Command line entry point: ``superrad run | validate | list-scenarios``."""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .errors import CapacityError, ConfigError
from .experiments.config import SCENARIOS, load_config
from .experiments.scenarios import check_capacity, expand_jobs, run_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAPACITY = 3
EXIT_CHECK = 4

_DESCRIPTIONS = {
    "homogeneous_scaling": "identical co-located atoms; peak scaling and saturation time vs atom count",
    "inhomogeneous_gamma_sweep": "4 detuned atoms in an 11-mode bath; burst emergence vs decay rate",
    "spatial_dilution": "evenly spaced chain; maximum coherence vs spacing",
    "trotter_error": "energy drift for a sweep of Trotter step counts",
    "jaynes_cummings": "one atom, one resonant mode; Rabi period and amplitude",
}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="superrad", description="Qubit simulations of collective emission.")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario config and write CSV output")
    run.add_argument("config")
    run.add_argument("--out-dir", help="override out_dir from the config")
    run.add_argument("--threads", type=int, help="parallel jobs (default: SUPERRAD_THREADS or CPU count)")
    run.add_argument("--check", action="store_true", help="exit with status 4 if a scenario check fails")
    val = sub.add_parser("validate", help="parse a config and check qubit capacity")
    val.add_argument("config")
    sub.add_parser("list-scenarios", help="print the available scenario kinds")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list-scenarios":
        for name in SCENARIOS:
            print(f"{name}: {_DESCRIPTIONS[name]}")
        return EXIT_OK
    try:
        cfg = load_config(args.config)
        check_capacity(cfg)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    if args.command == "validate":
        print(f"ok: {cfg.scenario}, {len(expand_jobs(cfg))} job(s)")
        return EXIT_OK
    try:
        result = run_scenario(cfg, args.out_dir, args.threads)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    for path in result.files:
        print(f"wrote {path}")
    for check in result.checks:
        print(check.line())
    if args.check and not result.passed:
        return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
