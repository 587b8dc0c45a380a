"""Minkowski bases: construction, cardinality and nef decompositions."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import NonBasisRay, NotBigNef, NotNef
from .exact_linalg import primitive_integral, solve_linear
from .ns_lattice import DivisorClass, SurfaceDatum, enumerate_nef_nonbig
from .zariski import (
    ChamberSupport,
    _partition,
    _search,
    count_chambers,
    default_jobs,
    gram,
    is_nef,
)


@dataclass(frozen=True)
class Flag:
    """A flag ``(x, C)``.  ``incidence=None`` means x is a general point of C;
    otherwise it lists the negative curves passing through x."""

    curve: DivisorClass
    incidence: frozenset | None = None

    @property
    def general(self) -> bool:
        return self.incidence is None


class MinkowskiBasis:
    """Sorted, deduplicated basis elements.

    Elements are held as primitive integer vectors; the :class:`DivisorClass`
    objects are built on first access, which matters at r = 8 where there are
    1.5 million of them.
    """

    def __init__(self, vectors: Sequence[tuple], provenance: dict | None = None):
        self.vectors = tuple(vectors)
        self.provenance = provenance or {}
        self._index = None
        self._elements = None

    @property
    def elements(self) -> tuple:
        if self._elements is None:
            self._elements = tuple(DivisorClass(v) for v in self.vectors)
        return self._elements

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, D) -> bool:
        if self._index is None:
            self._index = frozenset(self.vectors)
        coeffs = D.coeffs if isinstance(D, DivisorClass) else D
        if not any(coeffs):
            return False
        return primitive_integral(coeffs) in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, MinkowskiBasis) and self.vectors == other.vectors

    __hash__ = None


def _sort_key(v: tuple) -> tuple:
    # integer twin of DivisorClass.sort_key; b-values are the negated coefficients
    return (v[0],) + tuple(-abs(x) for x in v[1:]) + tuple(-x for x in v[1:])


@dataclass(frozen=True)
class CardinalityReport:
    NnB: int
    Zar: int
    mb_count: int
    paper_formula_value: int  # 1 + NnB + Zar
    sum_f: int | None = None

    @property
    def matches(self) -> dict:
        return {
            "NnB + Zar": self.mb_count == self.NnB + self.Zar,
            "1 + NnB + Zar": self.mb_count == self.paper_formula_value,
            "sum f_i": None if self.sum_f is None else self.sum_f == self.mb_count,
        }


def _require_big_nef(S: SurfaceDatum, C: DivisorClass):
    if not is_nef(S, C) or S.square(C) <= 0:
        raise NotBigNef(f"{S.fmt(C)} is not big and nef")


def minkowski_element(S: SurfaceDatum, c: ChamberSupport | Sequence[int], C: DivisorClass) -> DivisorClass:
    """Primitive class on the ray of ``C + sum(a_i N_i)``, orthogonal to all N_i in c.

    The a_i solve ``Gram(c) a = -(C.N_1, ..., C.N_r)``.
    """
    _require_big_nef(S, C)
    curves = c.curves if isinstance(c, ChamberSupport) else tuple(c)
    if not curves:
        return C.primitive()
    cp = S.curve_pairings(C)
    a = solve_linear(gram(S, curves), [-cp[i] for i in curves])
    assert all(x >= 0 for x in a), "negative coefficient from a negative-definite system"
    M = C
    for i, ai in zip(curves, a):
        M = M + S.negative_curves[i] * ai
    M = M.primitive()
    assert is_nef(S, M)
    return M


def nef_nonbig_classes(S: SurfaceDatum) -> tuple:
    """Primitive nef classes of square zero."""
    if S.is_del_pezzo():
        return enumerate_nef_nonbig(S.r) if S.r >= 1 else ()
    from .cones import nef_rays

    return tuple(R for R in nef_rays(S) if S.square(R) == 0)


class _ElementBuilder:
    """Integer fast path for the chamber elements of one flag curve.

    When a chamber's curves are pairwise orthogonal the system is diagonal and
    ``a_i = (C.N_i) / (-N_i^2)``; each curve's contribution is precomputed.
    Other chambers fall back to an exact solve.
    """

    def __init__(self, S: SurfaceDatum, C: DivisorClass):
        self.S = S
        self.C = C
        cp = S.curve_pairings(C)
        G = S.curve_gram
        n = len(cp)
        den = 1
        for i in range(n):
            den = math.lcm(den, (cp[i] / -G[i][i]).denominator)
        base = [x * den for x in C.coeffs]
        contrib = [[x * den * cp[i] / -G[i][i] for x in S.negative_curves[i].coeffs] for i in range(n)]
        self.fast = all(x.denominator == 1 for v in [base, *contrib] for x in v)
        self.base = tuple(int(x) for x in base) if self.fast else ()
        self.contrib = [tuple(int(x) for x in v) for v in contrib] if self.fast else []
        self.orth = _search(S).orth
        self.simple = _search(S).simple

    def key(self, chamber: tuple) -> tuple:
        orth = self.orth
        if self.fast and (self.simple or all(orth[i] >> j & 1 for k, i in enumerate(chamber) for j in chamber[k + 1:])):
            v = list(self.base)
            for i in chamber:
                v = [x + y for x, y in zip(v, self.contrib[i])]
            g = math.gcd(*v)
            return tuple(x // g for x in v)
        return primitive_integral(minkowski_element(self.S, chamber, self.C).coeffs)


def _simple_keys(builder: "_ElementBuilder", compat: list, i: int, later: int, out: set) -> None:
    """DFS over pairwise-orthogonal chambers carrying the running element vector."""
    contrib = builder.contrib
    gcd = math.gcd

    def rec(vec, cand):
        g = gcd(*vec)
        out.add(tuple(x // g for x in vec))
        while cand:
            low = cand & -cand
            cand ^= low
            j = low.bit_length() - 1
            rec([x + y for x, y in zip(vec, contrib[j])], cand & compat[j])

    rec([x + y for x, y in zip(builder.base, contrib[i])], later & compat[i])


def _chamber_keys(S: SurfaceDatum, C: DivisorClass, roots: list[int], with_provenance: bool):
    builder = _ElementBuilder(S, C)
    search = _search(S)
    keys: dict | set
    if with_provenance:
        keys = {}
        for i in roots:
            for ch in search.iter_subtree(i):
                keys.setdefault(builder.key(ch), []).append(ch)
        return keys
    keys = set()
    for i in roots:
        if search.simple and builder.fast:
            later = search.roots & ~((1 << (i + 1)) - 1)
            _simple_keys(builder, search.compat, i, later, keys)
        else:
            for ch in search.iter_subtree(i):
                keys.add(builder.key(ch))
    return keys


def minkowski_basis(
    S: SurfaceDatum, flag: Flag, provenance: bool = True, jobs: int | None = None
) -> MinkowskiBasis:
    """Basis for a big and nef flag curve: C, the nef non-big classes, and one
    element per chamber, deduplicated."""
    C = flag.curve
    _require_big_nef(S, C)
    if not flag.general:
        raise ValueError("basis construction needs a general point on the flag curve")
    jobs = default_jobs() if jobs is None else jobs
    Cp = primitive_integral(C.coeffs)
    prov: dict = {Cp: ["flag", ()]}
    for R in nef_nonbig_classes(S):
        prov.setdefault(tuple(int(x) for x in R.coeffs), []).append("nef-non-big")
    roots = _search(S).subtree_roots()
    if jobs <= 1:
        parts = [_chamber_keys(S, C, roots, provenance)]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = _partition(roots, jobs)
            parts = list(pool.map(_chamber_keys, [S] * len(chunks), [C] * len(chunks), chunks, [provenance] * len(chunks)))
    if not provenance:
        keys = set(prov)
        for part in parts:
            keys.update(part)
        return MinkowskiBasis(sorted(keys, key=_sort_key))
    for part in parts:
        for k, chs in part.items():
            prov.setdefault(k, []).extend(chs)
    vectors = sorted(prov, key=_sort_key)
    out = {}
    for k in vectors:
        srcs = prov[k]
        out[DivisorClass(k)] = [s for s in srcs if isinstance(s, str)] + sorted(s for s in srcs if not isinstance(s, str))
    return MinkowskiBasis(vectors, out)


def cardinality_report(
    S: SurfaceDatum, flag: Flag, with_faces: bool = False, jobs: int | None = None
) -> CardinalityReport:
    """All the counts side by side; nothing is reconciled."""
    nnb = len(nef_nonbig_classes(S))
    zar = count_chambers(S, jobs=jobs)
    mb = len(minkowski_basis(S, flag, provenance=False, jobs=jobs))
    sum_f = None
    if with_faces:
        from .cones import face_lattice

        sum_f = face_lattice(S).total
    return CardinalityReport(NnB=nnb, Zar=zar, mb_count=mb, paper_formula_value=1 + nnb + zar, sum_f=sum_f)


def _null_curves(S: SurfaceDatum, D: DivisorClass) -> tuple:
    return tuple(i for i, p in enumerate(S.curve_pairings(D)) if p == 0)


def decompose_nef(S: SurfaceDatum, flag: Flag, D: DivisorClass, basis: MinkowskiBasis | None = None) -> list:
    """Greedy non-negative decomposition of a nef class over the basis.

    Each step subtracts as much of the element attached to the face of D as
    keeps the remainder nef; the face dimension drops every time.
    Returns ``[(element, coefficient), ...]`` with coefficients > 0.
    """
    if not is_nef(S, D):
        raise NotNef(f"{S.fmt(D)} is not nef")
    C = flag.curve
    _require_big_nef(S, C)
    if basis is None:
        basis = minkowski_basis(S, flag, provenance=False)
    out: list = []
    rest = D
    for _ in range(S.rank + 2):
        if rest.is_zero:
            return out
        if S.square(rest) == 0:
            prim = rest.primitive()
            if prim not in basis:
                raise NonBasisRay(f"{S.fmt(rest)} is not a multiple of a basis element")
            out.append((prim, _ratio(rest, prim)))
            return out
        M = minkowski_element(S, _null_curves(S, rest), C)
        if M not in basis:
            raise NonBasisRay(f"face element {S.fmt(M)} missing from the basis")
        dp = S.generator_pairings(rest)
        mp = S.generator_pairings(M)
        t = min(d / m for d, m in zip(dp, mp) if m > 0)
        out.append((M, t))
        rest = rest - M * t
    raise AssertionError("greedy decomposition failed to terminate")


def _ratio(D: DivisorClass, E: DivisorClass) -> Fraction:
    i = next(k for k, x in enumerate(E.coeffs) if x != 0)
    return D.coeffs[i] / E.coeffs[i]
