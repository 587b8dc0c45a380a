import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minkbasis.errors import NotBig, NotNef, ZeroCurve
from minkbasis.minkowski import Flag
from minkbasis.ns_lattice import DivisorClass, del_pezzo
from minkbasis.okounkov import (
    Polygon,
    alpha_beta,
    area,
    minkowski_sum,
    mu_max,
    okounkov_body,
    sweep,
    to_svg,
    weighted_sum,
)
from minkbasis.zariski import zariski_decompose

from helpers import random_nef
from oracles import hull_of_sums, shoelace

P = DivisorClass.from_paper


def verts(poly):
    return [(F(x), F(y)) for x, y in poly.vertices]


def test_mu_examples():
    S = del_pezzo(2)
    m = mu_max(S, P(1, 0, 0), S.ample)
    assert m.mu == F(1, 3) and m.binding_ray == P(1, 0, 0)
    assert mu_max(S, S.ample, S.ample).mu == 1
    assert mu_max(S, P(1, 0, 0), P(1, 0, 0)).mu == 1
    with pytest.raises(ZeroCurve):
        mu_max(S, S.ample, P(0, 0, 0))
    with pytest.raises(NotNef):
        mu_max(S, S.ample, P(0, -1, 0))
    with pytest.raises(NotBig):
        mu_max(S, P(1, 1, 0), S.ample)


def test_alpha_beta_examples():
    S = del_pezzo(2)
    a, b = alpha_beta(S, P(1, 0, 0), Flag(S.ample))
    for t in (F(0), F(1, 7), F(1, 3)):
        assert a(t) == 0 and b(t) == 3 - 9 * t
    a, b = alpha_beta(S, S.ample, Flag(S.ample))
    assert b.breakpoints == (0, 1) and b.values == (7, 0)
    assert all(v == 0 for v in a.values)


def test_incidence_shifts_alpha():
    S = del_pezzo(2)
    L = S.curve_index(P(1, 1, 1))
    D = P(3, 2, 2)
    a, b = alpha_beta(S, D, Flag(P(1, 0, 0), frozenset({L})))
    assert a(0) == 1
    assert b(0) - a(0) == S.intersect(zariski_decompose(S, D).P, P(1, 0, 0))
    a0, _ = alpha_beta(S, D, Flag(P(1, 0, 0)))
    assert a0(0) == 0


def test_bodies_of_x2():
    S = del_pezzo(2)
    body = okounkov_body(S, P(1, 0, 0), Flag(S.ample))
    assert verts(body) == [(0, 0), (F(1, 3), 0), (0, 3)]
    assert area(body) == F(1, 2)
    body = okounkov_body(S, S.ample, Flag(S.ample))
    assert verts(body) == [(0, 0), (1, 0), (0, 7)]
    assert area(body) == F(7, 2)
    with pytest.raises(NotBig):
        okounkov_body(S, P(1, 1, 0), Flag(S.ample))
    seg = okounkov_body(S, P(1, 1, 0), Flag(S.ample), allow_degenerate=True)
    assert len(seg.vertices) <= 2 and area(seg) == 0


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_area_is_half_volume(r):
    S = del_pezzo(r)
    rng = random.Random(10 + r)
    for _ in range(25):
        D = random_nef(S, rng)
        for C in (S.ample, P(1, *([0] * r))):
            body = okounkov_body(S, D, Flag(C))
            assert area(body) == F(S.square(zariski_decompose(S, D).P), 2)
            assert area(body) == shoelace(verts(body))


@pytest.mark.parametrize("r", [2, 3])
def test_boundary_shape(r):
    S = del_pezzo(r)
    rng = random.Random(r)
    for _ in range(20):
        D = random_nef(S, rng) + S.negative_curves[rng.randrange(len(S.negative_curves))]
        a, b = alpha_beta(S, D, Flag(S.ample))
        sa, sb = a.slopes(), b.slopes()
        assert all(x >= 0 for x in sa) and sa == sorted(sa)
        assert sb == sorted(sb, reverse=True)
        assert b(0) - a(0) == S.intersect(zariski_decompose(S, D).P, S.ample)
        mu, segs = sweep(S, D, Flag(S.ample))
        assert segs[0].t0 == 0 and segs[-1].t1 == mu
        assert all(s.t1 == n.t0 for s, n in zip(segs, segs[1:]))


points = st.tuples(st.fractions(-5, 5, max_denominator=4), st.fractions(-5, 5, max_denominator=4))


@settings(max_examples=150, deadline=None)
@given(st.lists(points, min_size=1, max_size=7), st.lists(points, min_size=1, max_size=7))
def test_minkowski_sum_matches_hull_of_sums(A, B):
    PA, PB = Polygon.hull(A), Polygon.hull(B)
    got = minkowski_sum(PA, PB)
    assert got == hull_of_sums(PA, PB)
    assert area(got) >= area(PA) + area(PB)


def test_minkowski_sum_examples():
    sq = Polygon.hull([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert verts(sq + sq) == [(0, 0), (2, 0), (2, 2), (0, 2)]
    pt = Polygon(((F(2), F(3)),))
    assert (sq + pt) == sq.translate((2, 3))
    assert weighted_sum([(sq, 2), (pt, 1)]) == sq.scale(2).translate((2, 3))
    with pytest.raises(ValueError):
        sq.scale(-1)
    with pytest.raises(ValueError):
        Polygon(((F(0), F(0)), (F(0), F(1)), (F(1), F(0))))


def test_polygon_json_round_trip():
    body = okounkov_body(del_pezzo(2), P(3, 1, 2), Flag(P(1, 0, 0)))
    assert Polygon.from_json(body.to_json()) == body


def test_svg_is_y_up():
    tri = Polygon.hull([(0, 0), (1, 0), (0, 1)])
    svg = to_svg(tri, scale=10, margin=0)
    assert svg.startswith("<svg") and "(0,1)" in svg
    # the y = 1 vertex sits at the top of the picture
    assert "M 0 10 L 10 10 L 0 0 Z" in svg
