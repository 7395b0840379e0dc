"""Command-line entry point: `benes-onoc sweep | paths | dump-topology`."""

from __future__ import annotations

import argparse
import os
import sys

from .experiment import (
    ConfigError,
    emit_plot,
    parse_config,
    paths_debug,
    run_sweep,
    write_csv,
)
from .topology import build_network, dump_wiring

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2

OUTDIR_ENV = "BENES_ONOC_OUTDIR"

_OVERRIDE_FLAGS = [
    "algorithm", "k", "n", "msg_bytes", "load", "seed",
    "setup_bytes", "bandwidth_gbps", "control_hop_latency_ns",
    "data_hop_latency_ns", "retry_limit", "retry_backoff_ns",
    "warmup_fraction", "messages_target",
]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="benes-onoc",
        description="Benes optical NoC circuit-switching simulator (DRA vs BCRA)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a load sweep and write CSV/plot")
    sweep.add_argument("--config", help="key = value config file")
    sweep.add_argument("--out", default="results.csv", help="output CSV path")
    sweep.add_argument("--plot", help="optional output plot path (svg/pdf)")
    for key in _OVERRIDE_FLAGS:
        sweep.add_argument(f"--{key.replace('_', '-')}", dest=key,
                           help=f"override config key {key}")

    paths = sub.add_parser("paths", help="list all DRA paths and the BCRA path")
    paths.add_argument("--k", type=int, required=True)
    paths.add_argument("--src", type=int, required=True)
    paths.add_argument("--dest", type=int, required=True)

    dump = sub.add_parser("dump-topology", help="dump the wiring adjacency listing")
    dump.add_argument("--k", type=int, required=True)
    return parser


def _resolve_out(path: str) -> str:
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir and not os.path.isabs(path):
        return os.path.join(outdir, path)
    return path


def _cmd_sweep(args) -> int:
    overrides = {key: getattr(args, key) for key in _OVERRIDE_FLAGS
                 if getattr(args, key) is not None}
    try:
        spec = parse_config(args.config, overrides)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        rows = run_sweep(spec)
        out = _resolve_out(args.out)
        write_csv(rows, out)
        print(f"wrote {len(rows)} rows to {out}")
        if args.plot:
            plot = _resolve_out(args.plot)
            emit_plot(rows, plot)
            print(f"wrote plot to {plot}")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def _cmd_paths(args) -> int:
    try:
        sys.stdout.write(paths_debug(args.k, args.src, args.dest))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def _cmd_dump(args) -> int:
    try:
        sys.stdout.write(dump_wiring(build_network(args.k)))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if not exc.code else EXIT_VALIDATION
    if args.command == "sweep":
        return _cmd_sweep(args)
    if args.command == "paths":
        return _cmd_paths(args)
    return _cmd_dump(args)


if __name__ == "__main__":
    sys.exit(main())
