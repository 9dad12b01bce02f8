"""Sweep command line: ``ghzlab run --config <path>`` and ``ghzlab validate``.

Every run writes one CSV (fixed header, documented in the README) plus a JSON
manifest echoing the fully resolved configuration, the library version, the
seed and the wall time. Partially written outputs are removed when a run
fails. Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, ExperimentConfig, parse_config
from .experiments import RUNNERS, format_rows

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    overrides: dict[str, str] = {}
    if args.out is not None:
        overrides["run.output_dir"] = args.out
    if args.threads is not None:
        overrides["run.threads"] = str(args.threads)
    if args.seed is not None:
        overrides["run.seed"] = str(args.seed)
    if args.enable_n12:
        overrides["run.enable_n12"] = "true"
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    return parse_config(text, overrides)


def _write_outputs(config: ExperimentConfig, header, rows, extras) -> list[Path]:
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{config.experiment}.csv"
    manifest_path = out_dir / f"{config.experiment}_manifest.json"
    try:
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(format_rows(rows))
        manifest = {
            "experiment": config.experiment,
            "library_version": __version__,
            "seed": config.seed,
            "config": config.resolved,
            "outputs": [csv_path.name],
        }
        manifest.update(extras)
        with open(manifest_path, "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except BaseException:
        # no partial outputs on failure
        csv_path.unlink(missing_ok=True)
        manifest_path.unlink(missing_ok=True)
        raise
    return [csv_path, manifest_path]


def _cmd_run(args: argparse.Namespace) -> int:
    config = _load_config(args)
    started = time.monotonic()
    runner = RUNNERS[config.experiment]
    header, rows, extras = runner(config)
    extras = dict(extras)
    extras["wall_time_s"] = round(time.monotonic() - started, 3)
    written = _write_outputs(config, header, rows, extras)
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    config = _load_config(args)
    print(f"config OK: experiment={config.experiment} sizes={list(config.sizes)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ghzlab",
        description="GHZ equilibration laboratory: spin-chain sweeps to CSV",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func in (("run", _cmd_run), ("validate", _cmd_validate)):
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="path to the INI config")
        cmd.add_argument("--out", default=None, help="override [run].output_dir")
        cmd.add_argument("--threads", type=int, default=None)
        cmd.add_argument("--seed", type=int, default=None)
        cmd.add_argument(
            "--enable-n12",
            action="store_true",
            help="allow sizes up to 12 (memory and runtime heavy)",
        )
        cmd.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
