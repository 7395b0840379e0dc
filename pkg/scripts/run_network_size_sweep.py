#!/usr/bin/env python3
"""Load sweep over 8x8, 16x16 and 32x32 networks at 64 B, DRA vs BCRA.

Run length scales with network size so each source sees a comparable number
of messages.  Writes network_size_sweep.csv/.svg to the current directory
(or $BENES_ONOC_OUTDIR).
"""

import argparse
import os

from benes_onoc.experiment import RunRow, SimConfig, emit_plot, run_point, write_csv


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="short runs, fewer seeds")
    args = parser.parse_args()

    seeds = (1, 2) if args.quick else (1, 2, 3, 4, 5)
    per_source = 30 if args.quick else 300
    rows: list[RunRow] = []
    for alg in ("dra", "bcra"):
        for k in (3, 4, 5):
            for lam in (round(0.1 * i, 1) for i in range(1, 10)):
                for seed in seeds:
                    rows.append(run_point(SimConfig(
                        k=k, algorithm=alg, msg_bytes=64, lam=lam, seed=seed,
                        messages_target=per_source * 2**k,
                        retry_limit=3, retry_backoff_ps=100_000,
                    )))
    outdir = os.environ.get("BENES_ONOC_OUTDIR", ".")
    csv_path = os.path.join(outdir, "network_size_sweep.csv")
    svg_path = os.path.join(outdir, "network_size_sweep.svg")
    write_csv(rows, csv_path)
    emit_plot(rows, svg_path)
    print(f"wrote {csv_path} and {svg_path} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
