"""Command-line entry point.

    fpplab <kind> --config cfg.json [--seed S] [--workers W] [--out PREFIX]

Writes PREFIX.csv and PREFIX.json; without --out the CSV goes to stdout.
Exit codes: 0 success, 2 bad configuration, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .harness import KINDS, ConfigError, ExperimentConfig, ResourceCapError, run_experiment, to_csv, write_outputs

log = logging.getLogger("fpplab")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fpplab", description="First-passage percolation experiments")
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        sp = sub.add_parser(kind)
        sp.add_argument("--config", type=str, default=None, help="JSON file with experiment settings")
        sp.add_argument("--seed", type=int, default=None, help="master seed (overrides the config)")
        sp.add_argument("--workers", type=int, default=None, help="worker processes")
        sp.add_argument("--out", type=str, default=None, help="output prefix for .csv/.json")
        sp.add_argument("-v", "--verbose", action="store_true")
    return parser


def load_config(args) -> ExperimentConfig:
    raw = {}
    if args.config:
        try:
            with open(args.config) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}")
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
    raw = dict(raw)
    if raw.get("kind", args.kind) != args.kind:
        raise ConfigError(f"config kind {raw['kind']!r} does not match subcommand {args.kind!r}")
    raw["kind"] = args.kind
    for key in ("seed", "workers", "out"):
        val = getattr(args, key)
        if val is not None:
            raw[key] = val
    return ExperimentConfig.from_dict(raw)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = load_config(args)
        report = run_experiment(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    if cfg.out:
        paths = write_outputs(report, cfg.out, cfg.echo())
        log.info("wrote %s", ", ".join(paths))
    else:
        sys.stdout.write(to_csv(report))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
