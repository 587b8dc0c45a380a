"""Neron-Severi lattices of the surfaces we work on.

Internal coordinates are coefficients over the ordered basis
``(H, E1, ..., Er)``.  The user-facing convention ``(a; b1, ..., br)`` stands
for the class ``aH - sum(bj Ej)``; use :meth:`DivisorClass.from_paper` and
:meth:`DivisorClass.paper` to cross that boundary.
"""

from __future__ import annotations

import functools
import itertools
import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DimensionMismatch, InvalidSurface, OrbitBudgetExceeded, OutOfRange
from .exact_linalg import (
    QMatrix,
    diag,
    fmt_rat,
    inertia,
    is_symmetric,
    mat_vec,
    matrix,
    primitive_integral,
    rank,
    rat,
    vector,
)


@dataclass(frozen=True)
class DivisorClass:
    """A numerical class, stored as exact coefficients over the lattice basis."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", vector(self.coeffs))

    @classmethod
    def from_paper(cls, a, *b) -> "DivisorClass":
        """``from_paper(3, 1, 1)`` is ``3H - E1 - E2``."""
        return cls((rat(a),) + tuple(-rat(x) for x in b))

    @classmethod
    def basis(cls, rank: int, i: int) -> "DivisorClass":
        return cls(tuple(int(j == i) for j in range(rank)))

    def paper(self) -> tuple:
        return (self.coeffs[0],) + tuple(-x for x in self.coeffs[1:])

    @property
    def rank(self) -> int:
        return len(self.coeffs)

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.coeffs)

    @property
    def is_primitive(self) -> bool:
        if not self.is_integral or self.is_zero:
            return False
        return math.gcd(*(int(x) for x in self.coeffs)) == 1

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def primitive(self) -> "DivisorClass":
        return DivisorClass(primitive_integral(self.coeffs))

    def _check(self, other: "DivisorClass"):
        if len(other.coeffs) != len(self.coeffs):
            raise DimensionMismatch(f"rank {len(self.coeffs)} vs rank {len(other.coeffs)}")

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._check(other)
        return DivisorClass(tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-x for x in self.coeffs))

    def __mul__(self, k) -> "DivisorClass":
        k = rat(k)
        return DivisorClass(tuple(k * x for x in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, k) -> "DivisorClass":
        return self * (1 / rat(k))

    def sort_key(self) -> tuple:
        """Canonical order: by degree a, then by the b-vector read as (-|b1|, -|b2|, ...)."""
        p = self.paper()
        return (p[0],) + tuple(-abs(x) for x in p[1:]) + tuple(p[1:])

    def __str__(self) -> str:
        return format_class(self)

    def __repr__(self) -> str:
        return f"DivisorClass({format_class(self)})"


def format_class(D: DivisorClass, names: Sequence[str] | None = None) -> str:
    """Render e.g. ``3H-2E1-E2``; custom bases get generic names ``B0, B1, ...``."""
    if names is None:
        names = ["H"] + [f"E{j}" for j in range(1, D.rank)]
    parts = []
    for c, name in zip(D.coeffs, names):
        if c == 0:
            continue
        mag = abs(c)
        s = name if mag == 1 else f"{fmt_rat(mag)}{name}"
        parts.append(("-" if c < 0 else "+") + s)
    if not parts:
        return "0"
    out = "".join(parts)
    return out[1:] if out[0] == "+" else out


@dataclass(frozen=True)
class SurfaceDatum:
    """Lattice, intersection form and the negative/effective data of a surface."""

    rank: int
    form: QMatrix
    ample: DivisorClass
    canonical: DivisorClass
    negative_curves: tuple
    eff_generators: tuple
    del_pezzo_degree: int | None = field(default=None, compare=False)
    name: str = field(default="custom", compare=False)

    def intersect(self, D1: DivisorClass, D2: DivisorClass) -> Fraction:
        if D1.rank != self.rank or D2.rank != self.rank:
            raise DimensionMismatch(f"surface has rank {self.rank}")
        return sum(
            (x * y for x, y in zip(D1.coeffs, mat_vec(self.form, D2.coeffs))),
            Fraction(0),
        )

    def square(self, D: DivisorClass) -> Fraction:
        return self.intersect(D, D)

    @cached_property
    def curve_duals(self) -> tuple:
        """``Q @ N`` for each negative curve, so pairings become plain dot products."""
        return tuple(mat_vec(self.form, N.coeffs) for N in self.negative_curves)

    @cached_property
    def eff_duals(self) -> tuple:
        return tuple(mat_vec(self.form, G.coeffs) for G in self.eff_generators)

    @cached_property
    def curve_gram(self) -> QMatrix:
        """Intersection matrix of all negative curves."""
        duals = self.curve_duals
        return tuple(
            tuple(sum((a * b for a, b in zip(du, N.coeffs)), Fraction(0)) for N in self.negative_curves)
            for du in duals
        )

    def curve_pairings(self, D: DivisorClass) -> list[Fraction]:
        c = D.coeffs
        return [sum((a * b for a, b in zip(du, c)), Fraction(0)) for du in self.curve_duals]

    def generator_pairings(self, D: DivisorClass) -> list[Fraction]:
        c = D.coeffs
        return [sum((a * b for a, b in zip(du, c)), Fraction(0)) for du in self.eff_duals]

    def curve_index(self, D: DivisorClass) -> int:
        return self.negative_curves.index(D)

    def is_del_pezzo(self) -> bool:
        return self.del_pezzo_degree is not None

    @property
    def r(self) -> int:
        return self.rank - 1

    def fmt(self, D: DivisorClass) -> str:
        return format_class(D) if self.is_del_pezzo() else format_class(
            D, [f"B{i}" for i in range(self.rank)]
        )


def intersect(S: SurfaceDatum, D1: DivisorClass, D2: DivisorClass) -> Fraction:
    return S.intersect(D1, D2)


def adjunction_genus(S: SurfaceDatum, C: DivisorClass) -> Fraction:
    """Arithmetic genus ``(K.C + C^2)/2 + 1``."""
    return (S.intersect(S.canonical, C) + S.square(C)) / 2 + 1


def _check_r(r: int, lo: int = 1, hi: int = 8):
    if not isinstance(r, int) or not lo <= r <= hi:
        raise OutOfRange(f"number of blown-up points must lie in {lo}..{hi}, got {r!r}")


def _sorted_b_solutions(r: int, a: int, total: int, squares: int):
    """Non-increasing b-vectors of length r with given sum and sum of squares."""
    out = []

    def rec(i, rem_sum, rem_sq, cap, cur):
        if i == r:
            if rem_sum == 0 and rem_sq == 0:
                out.append(tuple(cur))
            return
        slots = r - i
        # every remaining entry is <= cap, so the sum cannot be finished otherwise
        if rem_sum > slots * cap or rem_sq > slots * cap * cap:
            return
        for b in range(min(cap, rem_sum), -1, -1):
            if b * b > rem_sq:
                continue
            cur.append(b)
            rec(i + 1, rem_sum - b, rem_sq - b * b, b, cur)
            cur.pop()

    if total >= 0 and squares >= 0:
        rec(0, total, squares, total, [])
    return out


def _with_permutations(a: int, bs: Iterable[tuple]) -> set:
    out = set()
    for b in bs:
        for p in set(itertools.permutations(b)):
            out.add((a,) + p)
    return out


def _canonical(classes: Iterable[DivisorClass]) -> list[DivisorClass]:
    return sorted(set(classes), key=DivisorClass.sort_key)


def solve_degree_genus(r: int, self_int: int, anti_can_degree: int, bound: int) -> list[DivisorClass]:
    """Integral classes with ``C^2 = self_int`` and ``-K.C = anti_can_degree``, a in 1..bound, b >= 0."""
    found = set()
    for a in range(1, bound + 1):
        bs = _sorted_b_solutions(r, a, 3 * a - anti_can_degree, a * a - self_int)
        found |= _with_permutations(a, bs)
    return _canonical(DivisorClass.from_paper(*p) for p in found)


@functools.lru_cache(maxsize=None)
def enumerate_negative_curves(r: int, bound: int = 7) -> tuple:
    """All (-1)-curve classes on the blowup of P^2 in r general points.

    Besides the exceptional curves E_j these are the classes with
    ``C^2 = -1`` and ``K.C = -1``; Cauchy-Schwarz on ``sum b = 3a - 1`` and
    ``sum b^2 = a^2 + 1`` forces ``a <= 7`` for r <= 8.
    """
    _check_r(r)
    exc = [DivisorClass.basis(r + 1, j) for j in range(1, r + 1)]
    return tuple(_canonical(exc + solve_degree_genus(r, -1, 1, bound)))


@functools.lru_cache(maxsize=None)
def enumerate_nef_nonbig(r: int, bound: int = 11) -> tuple:
    """Nef classes with ``C^2 = 0`` and ``-K.C = 2`` (the conic classes).

    Here the bound is ``(3a-2)^2 <= 8a^2``, i.e. ``a <= 11``.  Nefness is
    checked against the (-1)-curves only, in integer arithmetic.
    """
    _check_r(r)
    # the form is diag(1, -1, ..., -1), so C.N = a*a' - sum(b*b') in (a; b) coordinates
    negs = [tuple(int(x) for x in N.paper()) for N in enumerate_negative_curves(r)]
    found = set()
    for a in range(1, bound + 1):
        for p in _with_permutations(a, _sorted_b_solutions(r, a, 3 * a - 2, a * a)):
            if all(p[0] * n[0] - sum(x * y for x, y in zip(p[1:], n[1:])) >= 0 for n in negs):
                found.add(p)
    return tuple(_canonical(DivisorClass.from_paper(*p) for p in found))


@functools.lru_cache(maxsize=None)
def del_pezzo(r: int) -> SurfaceDatum:
    """The blowup X_r of P^2 in r general points, 0 <= r <= 8."""
    if not isinstance(r, int) or not 0 <= r <= 8:
        raise OutOfRange(f"del Pezzo surfaces need 0 <= r <= 8, got {r!r}")
    form = diag(1, *([-1] * r))
    K = DivisorClass.from_paper(-3, *([-1] * r))
    if r == 0:
        H = DivisorClass((1,))
        return SurfaceDatum(1, form, -K, K, (), (H,), del_pezzo_degree=9, name="X0")
    negs = enumerate_negative_curves(r)
    eff = tuple(negs) + tuple(C for C in enumerate_nef_nonbig(r) if C not in negs)
    return SurfaceDatum(r + 1, form, -K, K, negs, eff, del_pezzo_degree=9 - r, name=f"X{r}")


def cremona(S: SurfaceDatum, D: DivisorClass, points: Sequence[int]) -> DivisorClass:
    """Quadratic transformation based at three of the blown-up points (1-based indices)."""
    if not S.is_del_pezzo():
        raise OutOfRange("Cremona moves are defined on del Pezzo lattices only")
    i, j, k = points
    if len({i, j, k}) != 3 or not all(1 <= x <= S.r for x in (i, j, k)):
        raise OutOfRange(f"need three distinct point indices in 1..{S.r}, got {tuple(points)}")
    p = list(D.paper())
    a, bi, bj, bk = p[0], p[i], p[j], p[k]
    p[0] = 2 * a - bi - bj - bk
    p[i] = a - bj - bk
    p[j] = a - bi - bk
    p[k] = a - bi - bj
    return DivisorClass.from_paper(*p)


def _permute(D: DivisorClass, i: int, j: int) -> DivisorClass:
    c = list(D.coeffs)
    c[i], c[j] = c[j], c[i]
    return DivisorClass(c)


def weyl_orbit(S: SurfaceDatum, D: DivisorClass, cap: int = 100_000) -> list[DivisorClass]:
    """Closure of ``{D}`` under point permutations and the Cremona move at 1, 2, 3."""
    if not S.is_del_pezzo():
        raise OutOfRange("Weyl orbits are defined on del Pezzo lattices only")
    r = S.r
    seen = {D}
    queue = deque([D])
    while queue:
        cur = queue.popleft()
        moves = [_permute(cur, i, i + 1) for i in range(1, r)]
        if r >= 3:
            moves.append(cremona(S, cur, (1, 2, 3)))
        for nxt in moves:
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > cap:
                    raise OrbitBudgetExceeded(f"orbit exceeds {cap} classes")
                queue.append(nxt)
    return _canonical(seen)


def signature_ok(form: QMatrix) -> bool:
    pos, neg, zero = inertia(form)
    return pos == 1 and zero == 0


def validate_surface(S: SurfaceDatum) -> None:
    """Raise InvalidSurface naming the first violated invariant."""
    n = S.rank
    if len(S.form) != n or any(len(row) != n for row in S.form):
        raise InvalidSurface("intersection_matrix must be rank x rank")
    if not is_symmetric(S.form):
        raise InvalidSurface("intersection_matrix must be symmetric")
    if not signature_ok(S.form):
        raise InvalidSurface("intersection_matrix must have signature (1, rank-1)")
    for D in (S.ample, S.canonical, *S.negative_curves, *S.eff_generators):
        if D.rank != n:
            raise InvalidSurface(f"class {D.coeffs} has wrong length (rank is {n})")
    if S.square(S.ample) <= 0:
        raise InvalidSurface("ample class must have positive self-intersection")
    for G in S.eff_generators:
        if S.intersect(S.ample, G) <= 0:
            raise InvalidSurface(f"ample class must pair positively with effective generator {S.fmt(G)}")
    for N in S.negative_curves:
        if S.square(N) >= 0:
            raise InvalidSurface(f"negative curve {S.fmt(N)} has non-negative self-intersection")
    if rank([G.coeffs for G in S.eff_generators]) != n:
        raise InvalidSurface("eff_generators must span a full-dimensional cone")


def _rat_json(x: Fraction):
    return int(x) if x.denominator == 1 else fmt_rat(x)


def surface_to_json(S: SurfaceDatum) -> dict:
    vec = lambda D: [_rat_json(x) for x in D.coeffs]  # noqa: E731
    return {
        "rank": S.rank,
        "intersection_matrix": [[_rat_json(x) for x in row] for row in S.form],
        "ample": vec(S.ample),
        "canonical": vec(S.canonical),
        "negative_curves": [vec(N) for N in S.negative_curves],
        "eff_generators": [vec(G) for G in S.eff_generators],
    }


def surface_from_json(doc: dict, name: str = "custom") -> SurfaceDatum:
    """Build and validate a surface from the JSON document format."""
    try:
        n = int(doc["rank"])
        form = matrix(doc["intersection_matrix"])
        cls = lambda v: DivisorClass(vector(v))  # noqa: E731
        S = SurfaceDatum(
            rank=n,
            form=form,
            ample=cls(doc["ample"]),
            canonical=cls(doc["canonical"]),
            negative_curves=tuple(cls(v) for v in doc["negative_curves"]),
            eff_generators=tuple(cls(v) for v in doc["eff_generators"]),
            name=name,
        )
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidSurface(f"malformed surface document: {exc}") from exc
    validate_surface(S)
    return S


def load_surface(path: str | Path) -> SurfaceDatum:
    path = Path(path)
    return surface_from_json(json.loads(path.read_text()), name=path.stem)
