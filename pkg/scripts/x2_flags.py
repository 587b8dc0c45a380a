#!/usr/bin/env python3
"""Minkowski bases of the blowup of P^2 in two points for each nef flag curve.

For every big and nef C of small degree, prints the basis elements with
their provenance, so collisions between chambers (which happen exactly when
C is not ample) are visible.
"""

import argparse
import itertools

from minkbasis.minkowski import Flag, cardinality_report, minkowski_basis
from minkbasis.ns_lattice import DivisorClass, del_pezzo
from minkbasis.zariski import is_big, is_nef


def describe(S, src):
    if isinstance(src, str):
        return src
    return "{" + ", ".join(S.fmt(S.negative_curves[i]) for i in src) + "}"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--degree", type=int, default=3, help="largest H-coefficient to try")
    args = ap.parse_args(argv)
    S = del_pezzo(2)
    for a in range(1, args.degree + 1):
        for b1, b2 in itertools.product(range(a + 1), repeat=2):
            if b1 < b2:
                continue
            C = DivisorClass.from_paper(a, b1, b2)
            if not (is_nef(S, C) and is_big(S, C)) or not C.is_primitive:
                continue
            B = minkowski_basis(S, Flag(C))
            rep = cardinality_report(S, Flag(C))
            ample = all(p > 0 for p in S.curve_pairings(C))
            print(f"C = {S.fmt(C)}  ({'ample' if ample else 'nef, on a face'})  #MB = {len(B)}"
                  f"  (NnB + Zar = {rep.NnB + rep.Zar})")
            for E in B:
                srcs = ", ".join(describe(S, s) for s in B.provenance[E])
                print(f"    {S.fmt(E):<12} from {srcs}")
            print()


if __name__ == "__main__":
    main()
