from collections import Counter

import pytest
from hypothesis import given

from equikh.algebra import F2, QQ, Field, Poly
from equikh.complex import (ComplexError, GradedChainComplex, build_cube, mirror_dual,
                            reduced_subcomplex, verify_mirror_duality)
from equikh.corpus import CORPUS, one_crossing_unknot, trefoil
from equikh.diagram import braid_closure, mirror, resolve, unknot
from strategies import small_diagrams

SMALL = [e for e in CORPUS if e.diagram().n <= 6]


def state_sum_euler(D) -> Counter:
    """sum over cube vertices of (-1)^h q^(|u| + n+ - 2n-) (q + 1/q)^circles."""
    out = Counter()
    for u in range(1 << D.n):
        w = bin(u).count("1")
        k = len(resolve(D, u).circles)
        for x in range(k + 1):
            from math import comb
            out[k - 2 * x + w + D.n_plus - 2 * D.n_minus] += (-1) ** (w - D.n_minus) * comb(k, x)
    return Counter({q: c for q, c in out.items() if c})


def euler(C) -> Counter:
    out = Counter()
    for h, gs in C.gens.items():
        for g in gs:
            out[g.grq] += 1 if h % 2 == 0 else -1
    return Counter({q: c for q, c in out.items() if c})


def test_one_crossing_differential():
    # the end-labelled kink is negative, so its single edge map is a split
    D = one_crossing_unknot()
    C = build_cube(D, QQ)
    U, V, one = Poly.U(QQ), Poly.V(QQ), Poly.one(QQ)
    assert C.degrees == [-1, 0]
    h0, j1 = C.index(((0,), 0))
    col = {C.gens[0][i].label[1]: p for i, p in C.column(h0, j1).items()}
    # circles of the 1-resolution are sorted by smallest edge; masks: bit set = X
    assert col == {0b01: one, 0b10: one, 0b00: -(U + V)}
    h0, jx = C.index(((0,), 1))
    col = {C.gens[0][i].label[1]: p for i, p in C.column(h0, jx).items()}
    assert col == {0b11: one, 0b00: -U * V}


@pytest.mark.parametrize("entry", SMALL, ids=lambda e: e.name)
@pytest.mark.parametrize("F", [F2, QQ, Field(3)], ids=lambda F: F.name)
def test_cube_is_a_graded_complex(entry, F):
    C = build_cube(entry.diagram(), F)
    assert C.check_d_squared() and C.check_homogeneous()


@pytest.mark.parametrize("entry", SMALL, ids=lambda e: e.name)
def test_euler_characteristic_matches_state_sum(entry):
    D = entry.diagram()
    assert euler(build_cube(D, F2)) == state_sum_euler(D)


def test_frozen_euler_characteristics():
    # trefoil: q + q^3 + q^5 - q^9; figure-eight: q^-5 + q^5
    assert euler(build_cube(trefoil(), F2)) == Counter({1: 1, 3: 1, 5: 1, 9: -1})
    assert euler(build_cube(braid_closure([1, -2, 1, -2]), F2)) == Counter({-5: 1, 5: 1})


def test_cube_cap():
    with pytest.raises(ComplexError):
        build_cube(trefoil(), F2, max_crossings=2)


def test_json_round_trip():
    C = build_cube(trefoil(), QQ)
    assert GradedChainComplex.from_json(C.dumps()) == C
    assert GradedChainComplex.from_json(C.to_json()) == C


def test_reduced_subcomplex():
    D = trefoil()
    C = build_cube(D, QQ)
    R = reduced_subcomplex(C, D, basepoint=1)
    assert R.size() * 2 == C.size()
    assert R.check_d_squared() and R.check_homogeneous()
    # based 0-crossing unknot: one generator at gr_q 0, no differential
    R0 = reduced_subcomplex(build_cube(unknot(), QQ), unknot(), 1)
    assert [(g.degree, g.grq) for gs in R0.gens.values() for g in gs] == [(0, 0)]
    with pytest.raises(ComplexError):
        reduced_subcomplex(C, D)
    with pytest.raises(ComplexError):
        reduced_subcomplex(C, D, basepoint=42)


@pytest.mark.parametrize("entry", SMALL, ids=lambda e: e.name)
def test_mirror_dual_is_an_involution(entry):
    C = build_cube(entry.diagram(), QQ)
    M = mirror_dual(C)
    assert M.check_d_squared() and M.check_homogeneous()
    assert mirror_dual(M) == C


@pytest.mark.parametrize("D", [unknot(), one_crossing_unknot(), trefoil()],
                         ids=["unknot", "kink", "trefoil"])
@pytest.mark.parametrize("F", [F2, QQ], ids=lambda F: F.name)
def test_mirror_duality(D, F):
    assert verify_mirror_duality(D, F)
    if D.n:
        assert verify_mirror_duality(D, F, reduced=True, basepoint=D.edges[0])


def test_mirror_dual_matches_mirror_cube():
    D = trefoil()
    a = mirror_dual(build_cube(D, QQ))
    b = build_cube(mirror(D), QQ)
    assert sorted((g.degree, g.grq) for gs in a.gens.values() for g in gs) == \
        sorted((g.degree, g.grq) for gs in b.gens.values() for g in gs)


@given(small_diagrams)
def test_random_cubes(D):
    C = build_cube(D, QQ)
    assert C.check_d_squared() and C.check_homogeneous()
    assert euler(C) == state_sum_euler(D)
    assert mirror_dual(mirror_dual(C)) == C
