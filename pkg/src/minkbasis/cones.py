"""Polyhedral cones under an ambient bilinear pairing.

A cone carries a V-description (generators) and/or an H-description
(inequality vectors ``v`` meaning ``v . Q . x >= 0``).  The dual of the cone
spanned by ``g_1, ..., g_m`` is computed by the double description method,
inserting one inequality ``(Q g_k) . x >= 0`` at a time over the integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import BudgetExceeded, DegenerateCone, DimensionMismatch, NotAmple
from .exact_linalg import QMatrix, identity, mat_vec, primitive_integral, rank, solve_linear
from .ns_lattice import DivisorClass, SurfaceDatum


@dataclass(frozen=True)
class ConeRep:
    generators: tuple | None
    inequalities: tuple | None
    form: QMatrix

    def __post_init__(self):
        n = len(self.form)
        for v in (*(self.generators or ()), *(self.inequalities or ())):
            if len(v) != n:
                raise DimensionMismatch(f"vector of length {len(v)} in rank-{n} ambient space")
        if self.generators is not None and self.inequalities is not None:
            for g in self.generators:
                for v in self.inequalities:
                    if _pair(self.form, v, g) < 0:
                        raise ValueError("generator violates an inequality of the same cone")

    @property
    def dim(self) -> int:
        return len(self.form)


def _pair(form, u, v):
    return sum((a * b for a, b in zip(u, mat_vec(form, v))), 0)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _popcount(x: int) -> int:
    return bin(x).count("1")


def extreme_rays(normals: Sequence[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """Extreme rays of ``{x : a_k . x >= 0}`` for integer normals ``a_k``.

    The cone must be pointed, i.e. the normals must have full rank.  Rays come
    back primitive integral, in insertion-dependent order.
    """
    normals = [tuple(int(x) for x in a) for a in normals]
    if rank(normals) < dim:
        raise DegenerateCone("inequalities do not cut out a pointed cone")
    # seed with dim independent normals: rays of that simplicial cone are the columns of A^-1
    basis_idx: list[int] = []
    for k, a in enumerate(normals):
        if rank([normals[i] for i in basis_idx] + [a]) > len(basis_idx):
            basis_idx.append(k)
        if len(basis_idx) == dim:
            break
    A = [normals[i] for i in basis_idx]
    rays: list[tuple[int, ...]] = []
    for j in range(dim):
        e = [Fraction(int(i == j)) for i in range(dim)]
        rays.append(primitive_integral(solve_linear(A, e)))
    # zero sets as bitmasks over the normals processed so far
    zeros = []
    for j in range(dim):
        zeros.append(sum(1 << basis_idx[i] for i in range(dim) if i != j))
    done = 0
    for i in basis_idx:
        done |= 1 << i
    for k, a in enumerate(normals):
        if done >> k & 1:
            continue
        vals = [_dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zer]
        new_zeros = [zeros[i] for i in pos] + [zeros[i] | (1 << k) for i in zer]
        if neg:
            for p in pos:
                for q in neg:
                    common = zeros[p] & zeros[q]
                    if _popcount(common) < dim - 2:
                        continue
                    if any(
                        (zeros[t] & common) == common
                        for t in range(len(rays))
                        if t != p and t != q
                    ):
                        continue
                    ray = tuple(vals[p] * y - vals[q] * x for x, y in zip(rays[p], rays[q]))
                    new_rays.append(primitive_integral(ray))
                    new_zeros.append(common | (1 << k))
        rays, zeros = new_rays, new_zeros
        done |= 1 << k
    # duplicate normals can produce duplicate rays
    return list(dict.fromkeys(rays))


def dual_cone(C: ConeRep) -> ConeRep:
    """V-description of ``{x : x . Q . g >= 0 for all generators g}``."""
    if not C.generators:
        raise DegenerateCone("cone has no generators")
    if all(not any(g) for g in C.generators):
        raise DegenerateCone("generators span only the origin")
    normals = [primitive_integral(mat_vec(C.form, g)) for g in C.generators if any(g)]
    rays = extreme_rays(normals, C.dim)
    rays.sort()
    gens = tuple(tuple(Fraction(x) for x in r) for r in rays)
    return ConeRep(generators=gens, inequalities=tuple(C.generators), form=C.form)


def h_description(C: ConeRep) -> tuple:
    if C.inequalities is not None:
        return C.inequalities
    return dual_cone(C).generators


@dataclass(frozen=True)
class Membership:
    kind: str  # "interior" | "boundary" | "outside"
    tight: tuple = ()
    violated: tuple = ()


def membership(C: ConeRep, x: Sequence) -> Membership:
    """Locate ``x`` relative to the cone; ``tight`` lists indices of active inequalities."""
    if len(x) != C.dim:
        raise DimensionMismatch(f"point of length {len(x)} in rank-{C.dim} space")
    ineqs = h_description(C)
    vals = [_pair(C.form, v, x) for v in ineqs]
    violated = tuple(i for i, v in enumerate(vals) if v < 0)
    if violated:
        return Membership("outside", violated=violated)
    tight = tuple(i for i, v in enumerate(vals) if v == 0)
    return Membership("boundary" if tight else "interior", tight=tight)


def eff_cone(S: SurfaceDatum) -> ConeRep:
    return ConeRep(generators=tuple(G.coeffs for G in S.eff_generators), inequalities=None, form=S.form)


def nef_cone(S: SurfaceDatum) -> ConeRep:
    """Nef cone as the dual of the effective cone; rays are primitive integral.

    Cached on the (immutable) surface instance.
    """
    cached = S.__dict__.get("_nef_cone")
    if cached is None:
        cached = dual_cone(eff_cone(S))
        S.__dict__["_nef_cone"] = cached
    return cached


def nef_rays(S: SurfaceDatum) -> tuple:
    return tuple(DivisorClass(r) for r in nef_cone(S).generators)


@dataclass(frozen=True)
class Face:
    dim: int
    orthogonal_curves: tuple  # indices into S.negative_curves
    rays: tuple  # indices into the nef ray list


@dataclass(frozen=True)
class FaceLattice:
    faces: tuple
    f_vector: tuple
    big_vertices: int
    nonbig_vertices: int
    rays: tuple = field(default=())

    @property
    def total(self) -> int:
        return sum(self.f_vector)

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * f for i, f in enumerate(self.f_vector))


def face_lattice(S: SurfaceDatum, H: DivisorClass | None = None, max_faces: int = 100_000) -> FaceLattice:
    """Faces of the slice ``{D nef : D.H = 1}`` by closure of tight sets.

    A face of dimension i in the slice is a face of the nef cone of dimension
    i + 1; each is recorded with the negative curves orthogonal to it.
    """
    H = S.ample if H is None else H
    if S.square(H) <= 0 or any(p <= 0 for p in S.generator_pairings(H)):
        raise NotAmple(f"{S.fmt(H)} does not pair positively with every effective generator")
    rays = nef_rays(S)
    n_rays = len(rays)
    gen_pairs = [S.generator_pairings(R) for R in rays]
    # tight[g] = bitmask of rays orthogonal to generator g
    tight = [sum(1 << i for i in range(n_rays) if gen_pairs[i][g] == 0) for g in range(len(S.eff_generators))]
    full = (1 << n_rays) - 1
    seen = {full}
    frontier = [full]
    while frontier:
        nxt = []
        for F in frontier:
            for t in tight:
                G = F & t
                if G and G not in seen:
                    seen.add(G)
                    if len(seen) > max_faces:
                        raise BudgetExceeded(f"face lattice exceeds {max_faces} faces")
                    nxt.append(G)
        frontier = nxt
    rho = S.rank
    f = [0] * rho
    faces = []
    big = nonbig = 0
    curve_pairs = [S.curve_pairings(R) for R in rays]
    for F in sorted(seen, key=lambda m: (_popcount(m), m)):
        idx = tuple(i for i in range(n_rays) if F >> i & 1)
        d = rank([rays[i].coeffs for i in idx]) - 1
        orth = tuple(
            j for j in range(len(S.negative_curves)) if all(curve_pairs[i][j] == 0 for i in idx)
        )
        faces.append(Face(d, orth, idx))
        f[d] += 1
        if d == 0:
            if S.square(rays[idx[0]]) > 0:
                big += 1
            else:
                nonbig += 1
    faces.sort(key=lambda fc: (fc.dim, fc.rays))
    return FaceLattice(tuple(faces), tuple(f), big, nonbig, rays)


def standard_orthant(n: int) -> ConeRep:
    basis = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    return ConeRep(generators=basis, inequalities=None, form=identity(n))

