#!/usr/bin/env python3
"""Write SVG pictures of Okounkov polygons and check them against the basis.

For a nef D on X_r and the flag (general point, C), the body of D is the
weighted Minkowski sum of the bodies of the basis elements in its
decomposition.  The script draws both and asserts they coincide.
"""

import argparse
import random
from pathlib import Path

from minkbasis.exact_linalg import fmt_rat
from minkbasis.minkowski import Flag, decompose_nef, minkowski_basis
from minkbasis.ns_lattice import del_pezzo
from minkbasis.okounkov import area, okounkov_body, to_svg, weighted_sum
from minkbasis.cones import nef_rays


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=int, default=3)
    ap.add_argument("--count", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("results/okounkov"))
    args = ap.parse_args(argv)

    S = del_pezzo(args.r)
    flag = Flag(S.ample)
    B = minkowski_basis(S, flag, provenance=False)
    rays = nef_rays(S)
    rng = random.Random(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    for k in range(args.count):
        D = S.ample
        for R in rng.sample(rays, min(3, len(rays))):
            D = D + R * rng.randint(0, 3)
        body = okounkov_body(S, D, flag)
        terms = decompose_nef(S, flag, D, B)
        summed = weighted_sum([(okounkov_body(S, E, flag, allow_degenerate=True), c) for E, c in terms])
        assert summed == body, f"additivity failed for {S.fmt(D)}"
        path = args.out / f"X{args.r}_{k}.svg"
        path.write_text(to_svg(body, scale=40))
        parts = " + ".join(f"{fmt_rat(c)}*({S.fmt(E)})" for E, c in terms)
        print(f"{S.fmt(D):<24} area {fmt_rat(area(body)):>6}  = {parts}  -> {path}")


if __name__ == "__main__":
    main()
