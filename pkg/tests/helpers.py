"""Seeded generators of random classes shared by the test modules."""

from __future__ import annotations

import random

from minkbasis.cones import nef_rays
from minkbasis.ns_lattice import DivisorClass, SurfaceDatum


def zero(S: SurfaceDatum) -> DivisorClass:
    return DivisorClass((0,) * S.rank)


def random_nef(S: SurfaceDatum, rng: random.Random, big: bool = True, top: int = 3) -> DivisorClass:
    """A non-negative integer combination of nef rays; big ones get an ample summand."""
    rays = nef_rays(S)
    D = S.ample * rng.randint(1, 2) if big else zero(S)
    for R in rng.sample(rays, k=rng.randint(1, len(rays))):
        D = D + R * rng.randint(0, top)
    if D.is_zero:
        D = rays[0]
    return D


def random_pseff(S: SurfaceDatum, rng: random.Random) -> DivisorClass:
    """Effective by construction: nef part plus a random effective combination of curves."""
    D = random_nef(S, rng, big=rng.random() < 0.7, top=2)
    if S.negative_curves:
        for N in rng.sample(S.negative_curves, k=rng.randint(0, min(4, len(S.negative_curves)))):
            D = D + N * rng.randint(1, 5)
    return D


def random_integral(S: SurfaceDatum, rng: random.Random, lo: int = -6, hi: int = 6) -> DivisorClass:
    return DivisorClass.from_paper(rng.randint(0, hi), *[rng.randint(lo, hi) for _ in range(S.rank - 1)])
