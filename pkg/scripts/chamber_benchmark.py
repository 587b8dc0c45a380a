#!/usr/bin/env python3
"""Time chamber counting and listing on X_r, optionally with several workers.

    python scripts/chamber_benchmark.py --r 5 6 7 8 --jobs 1 2

Each measurement uses a fresh search (the per-surface cache is dropped
first), so the compatibility graph construction is included.
"""

import argparse
import time

from minkbasis.ns_lattice import del_pezzo
from minkbasis.zariski import count_chambers, enumerate_chambers


def timed(fn):
    t = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - t


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=int, nargs="+", default=[4, 5, 6, 7, 8])
    ap.add_argument("--jobs", type=int, nargs="+", default=[1])
    ap.add_argument("--list", action="store_true", help="also time full enumeration (memory heavy at r = 8)")
    args = ap.parse_args(argv)
    print(f"{'r':>2} {'jobs':>4} {'count':>9} {'count s':>8} {'list s':>8}")
    for r in args.r:
        for jobs in args.jobs:
            S = del_pezzo(r)
            S.__dict__.pop("_chamber_search", None)
            n, tc = timed(lambda: count_chambers(S, jobs=jobs))
            tl = ""
            if args.list:
                chambers, t = timed(lambda: enumerate_chambers(S, jobs=jobs))
                assert len(chambers) == n
                tl = f"{t:8.2f}"
            print(f"{r:>2} {jobs:>4} {n:>9} {tc:8.2f} {tl:>8}")


if __name__ == "__main__":
    main()
