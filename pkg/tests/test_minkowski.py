import random
from pathlib import Path

import pytest

from minkbasis.errors import NonBasisRay, NotBigNef, NotNef
from minkbasis.minkowski import (
    Flag,
    MinkowskiBasis,
    cardinality_report,
    decompose_nef,
    minkowski_basis,
    minkowski_element,
)
from minkbasis.ns_lattice import DivisorClass, del_pezzo, load_surface
from minkbasis.zariski import enumerate_chambers, is_nef

from helpers import random_nef

P = DivisorClass.from_paper
DATA = Path(__file__).parent / "data"


def idx(S, D):
    return S.curve_index(D)


def test_element_examples():
    S = del_pezzo(2)
    K = S.ample
    assert minkowski_element(S, (), K) == K
    assert minkowski_element(S, (idx(S, P(0, -1, 0)),), K) == P(3, 0, 1)
    assert minkowski_element(S, (idx(S, P(0, -1, 0)), idx(S, P(0, 0, -1))), K) == P(1, 0, 0)
    assert minkowski_element(S, (), K * 2) == K
    with pytest.raises(NotBigNef):
        minkowski_element(S, (), P(1, 1, 0))
    with pytest.raises(NotBigNef):
        minkowski_element(S, (), P(1, -1, 0))


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
def test_elements_are_nef_primitive_and_orthogonal(r):
    S = del_pezzo(r)
    C = S.ample
    for c in enumerate_chambers(S):
        M = minkowski_element(S, c, C)
        assert M.is_primitive and is_nef(S, M)
        for i in c.curves:
            assert S.intersect(M, S.negative_curves[i]) == 0


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5, 6])
def test_ample_flag_is_injective(r):
    S = del_pezzo(r)
    B = minkowski_basis(S, Flag(S.ample))
    chamber_sources = [s for E in B for s in B.provenance[E] if not isinstance(s, str)]
    assert len(chamber_sources) == len(set(chamber_sources)) == len(enumerate_chambers(S))
    assert all(len([s for s in B.provenance[E] if not isinstance(s, str)]) <= 1 for E in B)
    rep = cardinality_report(S, Flag(S.ample))
    assert rep.mb_count == rep.NnB + rep.Zar == len(B)
    assert rep.matches["NnB + Zar"] and not rep.matches["1 + NnB + Zar"]


def test_basis_contents_and_order():
    S = del_pezzo(2)
    B = minkowski_basis(S, Flag(S.ample))
    assert [str(E) for E in B] == ["H-E1", "H-E2", "H", "2H-E1-E2", "3H-E1-E2", "3H-E1", "3H-E2"]
    assert S.ample in B and P(2, 2, 0) in B and P(1, 1, 1) not in B
    assert B.provenance[S.ample] == ["flag", ()]
    assert B.provenance[P(1, 1, 0)] == ["nef-non-big"]
    assert minkowski_basis(S, Flag(S.ample), provenance=False) == B
    assert minkowski_basis(S, Flag(S.ample), jobs=2) == B


def test_collisions_for_non_ample_flag():
    S = del_pezzo(2)
    B = minkowski_basis(S, Flag(P(2, 1, 1)))
    rep = cardinality_report(S, Flag(P(2, 1, 1)))
    assert rep.mb_count == 6 < rep.NnB + rep.Zar
    # the flag class absorbs both the nef chamber and the chamber of the line
    assert sorted(len(B.provenance[E]) for E in B if E == P(2, 1, 1)) == [3]


def test_basis_rejections():
    S = del_pezzo(2)
    with pytest.raises(NotBigNef):
        minkowski_basis(S, Flag(P(1, 1, 0)))
    with pytest.raises(ValueError):
        minkowski_basis(S, Flag(S.ample, frozenset({0})))


def test_report_with_faces():
    S = del_pezzo(3)
    rep = cardinality_report(S, Flag(S.ample), with_faces=True)
    assert (rep.NnB, rep.Zar, rep.mb_count, rep.paper_formula_value, rep.sum_f) == (3, 18, 21, 22, 21)
    assert rep.matches["sum f_i"]
    assert cardinality_report(del_pezzo(1), Flag(del_pezzo(1).ample)).mb_count == 3


def test_decompose_examples():
    S = del_pezzo(2)
    flag = Flag(S.ample)
    assert decompose_nef(S, flag, P(4, 1, 1)) == [(S.ample, 1), (P(1, 0, 0), 1)]
    assert decompose_nef(S, flag, P(2, 2, 0)) == [(P(1, 1, 0), 2)]
    for E in minkowski_basis(S, flag):
        assert decompose_nef(S, flag, E) == [(E, 1)]
    with pytest.raises(NotNef):
        decompose_nef(S, flag, P(1, 2, 0))


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_decompose_properties(r):
    S = del_pezzo(r)
    flag = Flag(S.ample)
    B = minkowski_basis(S, flag, provenance=False)
    rng = random.Random(r)
    zero = DivisorClass((0,) * S.rank)
    for _ in range(60):
        D = random_nef(S, rng, big=rng.random() < 0.8)
        terms = decompose_nef(S, flag, D, B)
        assert sum((E * c for E, c in terms), zero) == D
        assert all(c > 0 and E in B for E, c in terms)
        assert len(terms) <= S.rank
        assert decompose_nef(S, flag, D * 3, B) == [(E, 3 * c) for E, c in terms]


def test_non_ample_flag_decompositions_are_exact_or_refused():
    # with the flag 2H - E1 - E2 two chambers collapse onto one element; the
    # greedy loop either reconstructs D exactly or names the missing ray
    S = del_pezzo(2)
    flag = Flag(P(2, 1, 1))
    B = minkowski_basis(S, flag, provenance=False)
    zero = DivisorClass((0,) * S.rank)
    rng = random.Random(0)
    done = 0
    for _ in range(100):
        D = random_nef(S, rng)
        try:
            terms = decompose_nef(S, flag, D, B)
        except NonBasisRay as exc:
            assert "basis" in str(exc)
            continue
        assert sum((E * c for E, c in terms), zero) == D
        assert all(c > 0 and E in B for E, c in terms)
        done += 1
    assert done > 0


def test_custom_surface_basis():
    S = load_surface(DATA / "infinitely_near.json")
    rep = cardinality_report(S, Flag(S.ample), with_faces=True)
    assert (rep.NnB, rep.Zar, rep.mb_count, rep.sum_f) == (1, 6, 7, 7)


def test_basis_container():
    B = MinkowskiBasis([(1, 0), (1, -1)])
    assert len(B) == 2 and B.elements == (DivisorClass((1, 0)), DivisorClass((1, -1)))
    assert DivisorClass((2, 0)) in B and DivisorClass((0, 0)) not in B
