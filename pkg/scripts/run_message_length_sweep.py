#!/usr/bin/env python3
"""16x16 load sweep over message lengths 32/64/128 B, DRA vs BCRA.

Writes message_length_sweep.csv and message_length_sweep.svg to the current
directory (or $BENES_ONOC_OUTDIR).  Expect a few minutes at full run length;
pass --quick for a fast smoke sweep.
"""

import argparse
import os

from benes_onoc.experiment import SimConfig, SweepSpec, emit_plot, run_sweep, write_csv


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="short runs, fewer seeds")
    args = parser.parse_args()

    seeds = (1, 2) if args.quick else (1, 2, 3, 4, 5)
    target = 1000 if args.quick else 10_000
    spec = SweepSpec(
        algorithms=("dra", "bcra"),
        ks=(4,),
        msg_bytes=(32, 64, 128),
        loads=tuple(round(0.1 * i, 1) for i in range(1, 10)),
        seeds=seeds,
        base=SimConfig(k=4, algorithm="dra", msg_bytes=64, lam=0.5, seed=1,
                       messages_target=target, retry_limit=3,
                       retry_backoff_ps=100_000),
    )
    rows = run_sweep(spec)
    outdir = os.environ.get("BENES_ONOC_OUTDIR", ".")
    csv_path = os.path.join(outdir, "message_length_sweep.csv")
    svg_path = os.path.join(outdir, "message_length_sweep.svg")
    write_csv(rows, csv_path)
    emit_plot(rows, svg_path)
    print(f"wrote {csv_path} and {svg_path} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
