"""Okounkov bodies of big divisors on surfaces, as exact rational polygons.

For a flag ``(x, C)`` the body of D is the region over ``0 <= t <= mu``
between ``alpha(t) = ord_x(N_t)`` and ``beta(t) = alpha(t) + P_t . C``, where
``D - tC = P_t + N_t`` is the Zariski decomposition.  Supports are constant
on intervals and the coefficients are affine there, so both functions are
computed by an exact sweep over breakpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cones import nef_rays
from .errors import NotBig, NotNef, ZeroCurve
from .exact_linalg import fmt_rat, solve_linear
from .minkowski import Flag
from .ns_lattice import DivisorClass, SurfaceDatum
from .zariski import gram, is_big, is_nef

Point = tuple  # (Fraction, Fraction)


@dataclass(frozen=True)
class PiecewiseLinear:
    breakpoints: tuple
    values: tuple

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        bp, vs = self.breakpoints, self.values
        if not bp[0] <= t <= bp[-1]:
            raise ValueError(f"{t} outside [{bp[0]}, {bp[-1]}]")
        for k in range(len(bp) - 1):
            if t <= bp[k + 1]:
                t0, t1 = bp[k], bp[k + 1]
                return vs[k] + (vs[k + 1] - vs[k]) * (t - t0) / (t1 - t0)
        return vs[-1]

    def slopes(self) -> list[Fraction]:
        bp, vs = self.breakpoints, self.values
        return [(vs[k + 1] - vs[k]) / (bp[k + 1] - bp[k]) for k in range(len(bp) - 1)]


@dataclass(frozen=True)
class MuValue:
    mu: Fraction
    binding_ray: DivisorClass


@dataclass(frozen=True)
class Segment:
    """``[t0, t1]`` with constant negative support; ``a_i(t) = a0_i + t * a1_i``."""

    t0: Fraction
    t1: Fraction
    support: tuple
    a0: tuple
    a1: tuple

    def coefficients(self, t) -> tuple:
        return tuple(x + t * y for x, y in zip(self.a0, self.a1))


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _canonical_start(vs: list) -> list:
    k = min(range(len(vs)), key=lambda i: (vs[i][1], vs[i][0]))
    return vs[k:] + vs[:k]


@dataclass(frozen=True)
class Polygon:
    """Convex polygon, CCW, starting at the lowest-then-leftmost vertex.

    One- and two-vertex polygons stand for a point and a segment.
    """

    vertices: tuple

    @classmethod
    def hull(cls, points) -> "Polygon":
        """Convex hull with collinear points removed (monotone chain)."""
        pts = sorted(set((Fraction(x), Fraction(y)) for x, y in points))
        if len(pts) <= 2:
            return cls(tuple(_canonical_start(pts)) if pts else ())

        def chain(seq):
            out: list = []
            for p in seq:
                while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
                    out.pop()
                out.append(p)
            return out

        lower = chain(pts)
        upper = chain(reversed(pts))
        hull = lower[:-1] + upper[:-1]
        return cls(tuple(_canonical_start(hull)))

    def __post_init__(self):
        vs = self.vertices
        if len(vs) >= 3:
            n = len(vs)
            if not all(_cross(vs[i], vs[(i + 1) % n], vs[(i + 2) % n]) > 0 for i in range(n)):
                raise ValueError("vertices are not strictly convex in CCW order")

    def edges(self) -> list[Point]:
        vs = self.vertices
        n = len(vs)
        if n < 2:
            return []
        return [(vs[(i + 1) % n][0] - vs[i][0], vs[(i + 1) % n][1] - vs[i][1]) for i in range(n)]

    def scale(self, k) -> "Polygon":
        k = Fraction(k)
        if k < 0:
            raise ValueError("only non-negative dilations")
        if k == 0:
            return Polygon(((Fraction(0), Fraction(0)),))
        return Polygon(tuple((k * x, k * y) for x, y in self.vertices))

    def translate(self, v: Point) -> "Polygon":
        return Polygon(tuple((x + v[0], y + v[1]) for x, y in self.vertices))

    def __add__(self, other: "Polygon") -> "Polygon":
        return minkowski_sum(self, other)

    def to_json(self) -> list:
        return [[fmt_rat(x), fmt_rat(y)] for x, y in self.vertices]

    @classmethod
    def from_json(cls, doc: Sequence) -> "Polygon":
        return cls.hull((Fraction(x), Fraction(y)) for x, y in doc)


def _half(v: Point) -> int:
    x, y = v
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def minkowski_sum(P: Polygon, Q: Polygon) -> Polygon:
    """Sum of convex polygons by merging edge vectors in angular order."""
    if not P.vertices:
        return Q
    if not Q.vertices:
        return P
    ep, eq = P.edges(), Q.edges()
    i = j = 0
    start = (P.vertices[0][0] + Q.vertices[0][0], P.vertices[0][1] + Q.vertices[0][1])
    pts = [start]
    cur = start
    while i < len(ep) or j < len(eq):
        if j == len(eq):
            take = ep[i]; i += 1  # noqa: E702
        elif i == len(ep):
            take = eq[j]; j += 1  # noqa: E702
        else:
            a, b = ep[i], eq[j]
            ha, hb = _half(a), _half(b)
            cr = a[0] * b[1] - a[1] * b[0]
            if ha < hb or (ha == hb and cr > 0):
                take = a; i += 1  # noqa: E702
            elif hb < ha or cr < 0:
                take = b; j += 1  # noqa: E702
            else:
                take = (a[0] + b[0], a[1] + b[1]); i += 1; j += 1  # noqa: E702
        cur = (cur[0] + take[0], cur[1] + take[1])
        pts.append(cur)
    # the walk closes on the start vertex unless both summands are points
    return Polygon(tuple(_drop_collinear(pts[:-1] if len(pts) > 1 else pts)))


def _drop_collinear(pts: list) -> list:
    out = list(dict.fromkeys(pts))
    changed = True
    while changed and len(out) >= 3:
        changed = False
        n = len(out)
        for k in range(n):
            if _cross(out[k - 1], out[k], out[(k + 1) % n]) == 0:
                del out[k]
                changed = True
                break
    if len(out) == 2 and out[0] == out[1]:
        out = out[:1]
    return _canonical_start(out) if out else out


def area(P: Polygon) -> Fraction:
    vs = P.vertices
    n = len(vs)
    if n < 3:
        return Fraction(0)
    s = sum((vs[i][0] * vs[(i + 1) % n][1] - vs[(i + 1) % n][0] * vs[i][1] for i in range(n)), Fraction(0))
    return s / 2


def mu_max(S: SurfaceDatum, D: DivisorClass, C: DivisorClass, require_big: bool = True) -> MuValue:
    """``sup{t : D - tC pseudo-effective}`` by duality with the nef rays."""
    if C.is_zero:
        raise ZeroCurve("flag curve is zero")
    if not is_nef(S, C):
        raise NotNef(f"flag curve {S.fmt(C)} is not nef")
    if require_big and not is_big(S, D):
        raise NotBig(f"{S.fmt(D)} is not big")
    best = None
    for R in nef_rays(S):
        cr = S.intersect(C, R)
        if cr > 0:
            t = S.intersect(D, R) / cr
            if best is None or t < best.mu:
                best = MuValue(t, R)
    assert best is not None, "a nonzero nef class pairs positively with some nef ray"
    return best


class _Sweep:
    def __init__(self, S: SurfaceDatum, D: DivisorClass, C: DivisorClass):
        self.S = S
        self.d = S.curve_pairings(D)
        self.c = S.curve_pairings(C)
        self.G = S.curve_gram
        self.D, self.C = D, C

    def affine(self, support: Sequence[int]) -> tuple:
        """Coefficients ``a(t) = a0 + t a1`` solving ``Gram a = (D - tC).N``."""
        if not support:
            return (), ()
        G = gram(self.S, support)
        a0 = solve_linear(G, [self.d[i] for i in support])
        a1 = solve_linear(G, [-self.c[i] for i in support])
        return a0, a1

    def pairings(self, support, a0, a1) -> list[tuple]:
        """``P_t . N_j`` as (constant, slope) for every negative curve j."""
        G = self.G
        out = []
        for j in range(len(self.d)):
            v0 = self.d[j] - sum((x * G[i][j] for x, i in zip(a0, support)), Fraction(0))
            v1 = -self.c[j] - sum((x * G[i][j] for x, i in zip(a1, support)), Fraction(0))
            out.append((v0, v1))
        return out

    def support_after(self, t0: Fraction) -> tuple:
        """Negative support of ``D - tC`` for t just above t0.

        Runs the growing-support algorithm over affine values compared
        lexicographically at ``t0 + epsilon``.
        """
        support: list[int] = []
        while True:
            a0, a1 = self.affine(support)
            members = set(support)
            viol = []
            for j, (v0, v1) in enumerate(self.pairings(support, a0, a1)):
                if j in members:
                    continue
                val = v0 + t0 * v1
                if val < 0 or (val == 0 and v1 < 0):
                    viol.append(j)
            if not viol:
                break
            support = sorted(support + viol)
        a0, a1 = self.affine(support)
        kept = [i for i, x, y in zip(support, a0, a1) if (x + t0 * y, y) > (0, 0)]
        return tuple(kept)

    def segments(self, mu: Fraction) -> list[Segment]:
        segs: list[Segment] = []
        t0 = Fraction(0)
        while t0 < mu:
            support = self.support_after(t0)
            a0, a1 = self.affine(support)
            t1 = mu
            for x, y in zip(a0, a1):
                if y < 0:
                    t = -x / y
                    if t0 < t < t1:
                        t1 = t
            members = set(support)
            for j, (v0, v1) in enumerate(self.pairings(support, a0, a1)):
                if j not in members and v1 < 0:
                    t = -v0 / v1
                    if t0 < t < t1:
                        t1 = t
            segs.append(Segment(t0, t1, support, a0, a1))
            t0 = t1
        return segs


def sweep(S: SurfaceDatum, D: DivisorClass, flag: Flag, require_big: bool = True) -> tuple:
    """``(mu, segments)`` for the flag curve; segments are empty when mu = 0."""
    m = mu_max(S, D, flag.curve, require_big=require_big)
    return m.mu, _Sweep(S, D, flag.curve).segments(m.mu)


def alpha_beta(S: SurfaceDatum, D: DivisorClass, flag: Flag, require_big: bool = True):
    """The lower and upper boundary functions of the body over ``[0, mu]``."""
    C = flag.curve
    mu, segs = sweep(S, D, flag, require_big)
    incidence = flag.incidence or frozenset()
    curve_c = S.curve_pairings(C)
    cc = S.square(C)
    dc = S.intersect(D, C)

    def at(seg: Segment, t):
        a = seg.coefficients(t)
        alpha = sum((x for i, x in zip(seg.support, a) if i in incidence), Fraction(0))
        # P_t . C = (D - tC).C - sum a_i N_i.C
        beta = alpha + dc - t * cc - sum((x * curve_c[i] for i, x in zip(seg.support, a)), Fraction(0))
        return alpha, beta

    if not segs:
        # mu = 0: the body collapses onto the segment over t = 0
        z = _decompose_at(S, D)
        alpha = sum((x for i, x in zip(z.support, z.coefficients) if i in incidence), Fraction(0))
        beta = alpha + S.intersect(z.P, C)
        zero = Fraction(0)
        return PiecewiseLinear((zero,), (alpha,)), PiecewiseLinear((zero,), (beta,))
    ts = [segs[0].t0]
    al, be = [], []
    a, b = at(segs[0], segs[0].t0)
    al.append(a)
    be.append(b)
    for seg in segs:
        a, b = at(seg, seg.t1)
        ts.append(seg.t1)
        al.append(a)
        be.append(b)
    return PiecewiseLinear(tuple(ts), tuple(al)), PiecewiseLinear(tuple(ts), tuple(be))


def _decompose_at(S, D):
    from .zariski import zariski_decompose

    return zariski_decompose(S, D)


def okounkov_body(S: SurfaceDatum, D: DivisorClass, flag: Flag, allow_degenerate: bool = False) -> Polygon:
    """Polygon between alpha and beta; non-big nef classes give a segment only
    when ``allow_degenerate`` is set."""
    if not allow_degenerate and not is_big(S, D):
        raise NotBig(f"{S.fmt(D)} is not big")
    alpha, beta = alpha_beta(S, D, flag, require_big=not allow_degenerate)
    ts = alpha.breakpoints
    pts = [(t, alpha.values[k]) for k, t in enumerate(ts)] + [
        (t, beta.values[k]) for k, t in reversed(list(enumerate(ts)))
    ]
    P = Polygon(tuple(_drop_collinear(pts)))
    if not allow_degenerate and len(P.vertices) < 3:
        raise AssertionError("big divisor produced a degenerate body")
    return P


def weighted_sum(terms: Sequence[tuple]) -> Polygon:
    """``sum(c_k * P_k)`` for (polygon, coefficient) pairs."""
    out = Polygon(((Fraction(0), Fraction(0)),))
    for P, c in terms:
        out = minkowski_sum(out, P.scale(c))
    return out


def to_svg(P: Polygon, scale: float = 100.0, margin: float = 10.0) -> str:
    """Polygon path in a y-up frame (the SVG y axis is flipped)."""
    xs = [float(x) for x, _ in P.vertices] or [0.0]
    ys = [float(y) for _, y in P.vertices] or [0.0]
    w = (max(xs) - min(xs)) * scale + 2 * margin
    h = (max(ys) - min(ys)) * scale + 2 * margin
    coords = [
        ((float(x) - min(xs)) * scale + margin, (max(ys) - float(y)) * scale + margin) for x, y in P.vertices
    ]
    path = " ".join(f"{'M' if k == 0 else 'L'} {x:.6g} {y:.6g}" for k, (x, y) in enumerate(coords)) + " Z"
    labels = " ".join(f"({fmt_rat(x)},{fmt_rat(y)})" for x, y in P.vertices)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.6g}" height="{h:.6g}" '
        f'viewBox="0 0 {w:.6g} {h:.6g}">\n'
        f"  <desc>vertices {labels}</desc>\n"
        f'  <path d="{path}" fill="#9ecae1" stroke="#08519c" stroke-width="1"/>\n'
        "</svg>\n"
    )
