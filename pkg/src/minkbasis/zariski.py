"""Zariski decompositions and Zariski chambers.

Chambers of the big cone are identified with the subsets of negative curves
whose intersection matrix is negative definite (the empty set being the nef
chamber).  :class:`ChamberSearch` enumerates them by depth-first search over
increasing curve indices, pruning with an incremental definiteness test.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import BudgetExceeded, NotBig, NotPseudoEffective, NotRealizable
from .exact_linalg import NegDefChain, QMatrix, is_negative_definite, solve_linear
from .ns_lattice import DivisorClass, SurfaceDatum


@dataclass(frozen=True)
class ZariskiDecomposition:
    D: DivisorClass
    P: DivisorClass
    N: DivisorClass
    support: tuple  # indices into S.negative_curves, ascending
    coefficients: tuple  # positive rationals, aligned with support


@dataclass(frozen=True)
class ChamberSupport:
    curves: tuple
    gram: QMatrix

    @classmethod
    def of(cls, S: SurfaceDatum, curves: Sequence[int]) -> "ChamberSupport":
        curves = tuple(sorted(curves))
        return cls(curves, gram(S, curves))

    def __len__(self) -> int:
        return len(self.curves)


def gram(S: SurfaceDatum, idx: Sequence[int]) -> QMatrix:
    G = S.curve_gram
    return tuple(tuple(G[i][j] for j in idx) for i in idx)


def is_nef(S: SurfaceDatum, D: DivisorClass) -> bool:
    return all(p >= 0 for p in S.generator_pairings(D))


def is_pseudoeffective(S: SurfaceDatum, D: DivisorClass) -> bool:
    """Duality test against the extremal rays of the nef cone."""
    from .cones import nef_rays

    return all(S.intersect(D, R) >= 0 for R in nef_rays(S))


def is_big(S: SurfaceDatum, D: DivisorClass) -> bool:
    try:
        z = zariski_decompose(S, D)
    except NotPseudoEffective:
        return False
    return S.square(z.P) > 0


def zariski_decompose(S: SurfaceDatum, D: DivisorClass) -> ZariskiDecomposition:
    """Positive and negative parts of a pseudo-effective class.

    Grows the support in rounds: every negative curve meeting the current
    positive part negatively joins, then the coefficients are re-solved so
    that ``D - N`` is orthogonal to every support curve.
    """
    curves = S.negative_curves
    dpair = S.curve_pairings(D)
    support: list[int] = []
    coeffs: tuple = ()
    ppair = list(dpair)
    G_all = S.curve_gram
    while True:
        members = set(support)
        viol = [i for i, p in enumerate(ppair) if p < 0 and i not in members]
        if not viol:
            break
        support = sorted(support + viol)
        G = gram(S, support)
        if not is_negative_definite(G):
            raise NotPseudoEffective(f"{S.fmt(D)}: support would not be negative definite")
        coeffs = solve_linear(G, [dpair[i] for i in support])
        ppair = [
            dpair[j] - sum((a * G_all[i][j] for a, i in zip(coeffs, support)), Fraction(0))
            for j in range(len(curves))
        ]
    if any(a < 0 for a in coeffs):
        raise NotPseudoEffective(f"{S.fmt(D)}: negative coefficient in the negative part")
    kept = [(i, a) for i, a in zip(support, coeffs) if a != 0]
    support = [i for i, _ in kept]
    coeffs = tuple(a for _, a in kept)
    N = DivisorClass((0,) * S.rank)
    for i, a in kept:
        N = N + curves[i] * a
    P = D - N
    if not is_nef(S, P):
        raise NotPseudoEffective(f"{S.fmt(D)} is not pseudo-effective")
    return ZariskiDecomposition(D, P, N, tuple(support), coeffs)


def neg_support(S: SurfaceDatum, D: DivisorClass) -> ChamberSupport:
    z = zariski_decompose(S, D)
    if S.square(z.P) <= 0:
        raise NotBig(f"{S.fmt(D)} is not big")
    return ChamberSupport.of(S, z.support)


class ChamberSearch:
    """Depth-first enumeration of negative-definite subsets of the negative curves.

    Subsets are extended only by curves of larger index; candidate sets are
    bitmasks.  A curve orthogonal to everything in the current subset extends
    it for free (the Schur complement is just its self-intersection), the
    other candidates need an exact LDL update.  When negative definiteness
    reduces to pairwise orthogonality, as for (-1)-curves, counting skips the
    factorisation entirely.
    """

    def __init__(self, S: SurfaceDatum):
        G = S.curve_gram
        n = len(G)
        self.n = n
        self.gram = G
        self.diag = [G[i][i] for i in range(n)]
        bit = [1 << j for j in range(n)]
        # compat[i]: curves j > i whose 2x2 minor with i is negative definite
        self.compat = [
            sum(bit[j] for j in range(i + 1, n) if G[i][i] * G[j][j] - G[i][j] ** 2 > 0)
            for i in range(n)
        ]
        self.orth = [sum(bit[j] for j in range(n) if j != i and G[i][j] == 0) for i in range(n)]
        self.roots = sum(bit[i] for i in range(n) if self.diag[i] < 0)
        self.simple = all((self.compat[i] & ~self.orth[i]) == 0 for i in range(n))

    def _extend(self, chain: NegDefChain, subset: list, i: int, orth_all: int) -> NegDefChain:
        if orth_all >> i & 1:
            return NegDefChain(chain.pivots + (self.diag[i],), chain.lrows + ((Fraction(0),) * len(subset),))
        new = chain.extend([self.gram[k][i] for k in subset], self.diag[i])
        assert new is not None, "candidate filter let a non-definite extension through"
        return new

    def _filter(self, chain: NegDefChain, subset: list, cand: int, orth_all: int) -> int:
        hard = cand & ~orth_all
        while hard:
            low = hard & -hard
            hard ^= low
            j = low.bit_length() - 1
            if chain.schur([self.gram[k][j] for k in subset], self.diag[j]) >= 0:
                cand &= ~low
        return cand

    def _walk(self, subset: list, chain: NegDefChain, cand: int, orth_all: int) -> Iterator[tuple]:
        yield tuple(subset)
        while cand:
            low = cand & -cand
            cand ^= low
            i = low.bit_length() - 1
            new_chain = self._extend(chain, subset, i, orth_all)
            new_orth = orth_all & self.orth[i]
            subset.append(i)
            child = self._filter(new_chain, subset, cand & self.compat[i], new_orth)
            yield from self._walk(subset, new_chain, child, new_orth)
            subset.pop()

    def _walk_simple(self, subset: list, cand: int) -> Iterator[tuple]:
        yield tuple(subset)
        compat = self.compat
        while cand:
            low = cand & -cand
            cand ^= low
            i = low.bit_length() - 1
            subset.append(i)
            yield from self._walk_simple(subset, cand & compat[i])
            subset.pop()

    def _count_simple(self, cand: int) -> int:
        total = 1
        compat = self.compat
        while cand:
            low = cand & -cand
            cand ^= low
            total += self._count_simple(cand & compat[low.bit_length() - 1])
        return total

    def subtree_roots(self) -> list[int]:
        return [i for i in range(self.n) if self.roots >> i & 1]

    def iter_subtree(self, i: int) -> Iterator[tuple]:
        """All chambers whose smallest curve index is ``i``."""
        later = self.roots & ~((1 << (i + 1)) - 1)
        if self.simple:
            return self._walk_simple([i], later & self.compat[i])
        chain = NegDefChain((self.diag[i],), ((),))
        cand = self._filter(chain, [i], later & self.compat[i], self.orth[i])
        return self._walk([i], chain, cand, self.orth[i])

    def count_subtree(self, i: int) -> int:
        if self.simple:
            later = self.roots & ~((1 << (i + 1)) - 1)
            return self._count_simple(later & self.compat[i])
        return sum(1 for _ in self.iter_subtree(i))

    def __iter__(self) -> Iterator[tuple]:
        yield ()
        for i in self.subtree_roots():
            yield from self.iter_subtree(i)


def _search(S: SurfaceDatum) -> ChamberSearch:
    cached = S.__dict__.get("_chamber_search")
    if cached is None:
        cached = ChamberSearch(S)
        S.__dict__["_chamber_search"] = cached
    return cached


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("MINKBASIS_JOBS", "1")))
    except ValueError:
        return 1


def _partition(roots: list[int], jobs: int) -> list[list[int]]:
    # round-robin: early roots own the largest subtrees
    return [roots[k::jobs] for k in range(jobs) if roots[k::jobs]]


def _count_worker(S: SurfaceDatum, roots: list[int]) -> int:
    search = _search(S)
    return sum(search.count_subtree(i) for i in roots)


def _list_worker(S: SurfaceDatum, roots: list[int]) -> dict:
    search = _search(S)
    return {i: list(search.iter_subtree(i)) for i in roots}


def count_chambers(S: SurfaceDatum, budget: int | None = None, jobs: int | None = None) -> int:
    """Number of negative-definite supports, the empty one included."""
    search = _search(S)
    roots = search.subtree_roots()
    jobs = default_jobs() if jobs is None else jobs
    if jobs <= 1 or len(roots) < 2:
        total = 1
        for i in roots:
            total += search.count_subtree(i)
            if budget is not None and total > budget:
                raise BudgetExceeded(f"more than {budget} chambers")
        return total
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_count_worker, [S] * jobs, _partition(roots, jobs)))
    total = 1 + sum(parts)
    if budget is not None and total > budget:
        raise BudgetExceeded(f"more than {budget} chambers")
    return total


def iter_chambers(S: SurfaceDatum, budget: int | None = None) -> Iterator[tuple]:
    """Chamber supports as ascending index tuples, in lexicographic order."""
    for k, c in enumerate(_search(S)):
        if budget is not None and k >= budget:
            raise BudgetExceeded(f"more than {budget} chambers")
        yield c


def enumerate_chambers(S: SurfaceDatum, budget: int | None = None, jobs: int | None = None) -> list[ChamberSupport]:
    jobs = default_jobs() if jobs is None else jobs
    if jobs <= 1:
        supports = list(iter_chambers(S, budget))
    else:
        roots = _search(S).subtree_roots()
        merged: dict = {}
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_list_worker, [S] * jobs, _partition(roots, jobs)):
                merged.update(part)
        supports = [()] + [c for i in roots for c in merged[i]]
        if budget is not None and len(supports) > budget:
            raise BudgetExceeded(f"more than {budget} chambers")
    return [ChamberSupport.of(S, c) for c in supports]


def face_element(S: SurfaceDatum, curves: Sequence[int], C: DivisorClass) -> DivisorClass:
    """``C + sum(a_i N_i)`` orthogonal to every N_i, with ``G a = -(C.N_i)``."""
    curves = tuple(curves)
    if not curves:
        return C
    cp = S.curve_pairings(C)
    a = solve_linear(gram(S, curves), [-cp[i] for i in curves])
    M = C
    for i, ai in zip(curves, a):
        M = M + S.negative_curves[i] * ai
    return M


def chamber_witness(S: SurfaceDatum, c: ChamberSupport | Sequence[int], delta=1) -> DivisorClass:
    """A big class whose negative part is supported exactly on ``c``.

    ``W = M + delta * sum(N_i)`` where ``M = A + sum(a_i N_i)`` is the element
    orthogonal to ``c`` built from the ample class ``A``.  By uniqueness of the
    Zariski decomposition ``(M, delta * sum N_i)`` is the decomposition of W
    whenever M is nef and the a_i are non-negative; the round trip is checked.
    """
    curves = c.curves if isinstance(c, ChamberSupport) else tuple(sorted(c))
    if not curves:
        return S.ample
    if not is_negative_definite(gram(S, curves)):
        raise NotRealizable(f"support {curves} is not negative definite")
    M = face_element(S, curves, S.ample)
    W = M
    for i in curves:
        W = W + S.negative_curves[i] * delta
    try:
        got = neg_support(S, W).curves
    except (NotPseudoEffective, NotBig) as exc:
        raise NotRealizable(f"support {curves}: {exc}") from exc
    if got != curves:
        raise NotRealizable(f"support {curves} realised as {got}")
    return W
