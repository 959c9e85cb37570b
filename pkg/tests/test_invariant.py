import math
from fractions import Fraction

import pytest
from hypothesis import given, settings

from equikh.algebra import F2, QQ, Poly
from equikh.complex import build_cube, reduced_subcomplex
from equikh.corpus import BY_NAME, CORPUS, one_crossing_unknot, torus_3_m4, trefoil
from equikh.diagram import DiagramError, braid_closure, disjoint_union, unknot
from equikh.invariant import (PLProfile, SearchError, complex_for, gr_t_endpoint, gr_t_of_chain,
                              gr_t_of_diagram, parse_t, rasmussen_s_crosscheck, s_t, s_tilde_t,
                              sweep, truncate)
from equikh.lee import localized_rank
from equikh.scan import scan_reduce
from oracles import oracle_gr_t
from strategies import small_diagrams

QUARTERS = [Fraction(k, 4) for k in range(9)]
INTERIOR = [t for t in QUARTERS if 0 < t < 2]
ORACLE_SET = [e for e in CORPUS if e.diagram().n <= 4]


def test_parse_t():
    assert parse_t("3/4") == Fraction(3, 4)
    assert parse_t(1) == 1
    for bad in ["5/2", "-1", "x", "1/0"]:
        with pytest.raises(ValueError):
            parse_t(bad)
    with pytest.raises(ValueError):
        parse_t("1/65", max_den=64)


def test_gr_t_of_chain_unknot():
    C = build_cube(unknot(), F2)
    i = C.index(((), 0))[1]
    assert gr_t_of_chain({i: Poly.U(F2)}, Fraction(1, 2), C.gens[0]) == Fraction(1, 2)
    assert gr_t_of_chain({}, Fraction(1, 2), C.gens[0]) == math.inf


def test_gr_t_of_chain_torus_knot():
    D = torus_3_m4()
    C = build_cube(D, F2)
    u = D.oriented_vertex()
    h, i = C.index((u, 0))
    h2, k = C.index((u, 0b100))
    UV = Poly.U(F2) * Poly.V(F2)
    for t in QUARTERS:
        assert gr_t_of_chain({i: UV}, t, C.gens[h]) == -7
        z = {k: Poly.U(F2) + Poly.V(F2)}
        assert gr_t_of_chain(z, t, C.gens[h2]) == min(-7 - t, -9 + t)


def test_truncation_of_unknot():
    C = build_cube(unknot(), F2)
    labels = lambda T: sorted((C.gens[0][i].label[1], m, n) for i, m, n in T.basis)  # noqa: E731
    assert labels(truncate(C, 1, 1, 0)) == [(0, 0, 0)]
    # at t = 1 both U and V lower gr_t by 1: degree <= 2 multiples of 1, plus X itself
    assert labels(truncate(C, 1, -1, 0)) == [(0, 0, 0), (0, 0, 1), (0, 0, 2), (0, 1, 0),
                                             (0, 1, 1), (0, 2, 0), (1, 0, 0)]
    assert labels(truncate(C, 1, 0, 0)) == [(0, 0, 0), (0, 0, 1), (0, 1, 0)]
    assert truncate(C, 1, 2, 0).basis == []
    with pytest.raises(ValueError):
        truncate(C, 0, 0, 0)              # t = 0 needs a cap


@pytest.mark.parametrize("entry", ORACLE_SET, ids=lambda e: e.name)
@pytest.mark.parametrize("mode", ["cube", "scan"])
def test_search_matches_oracle(entry, mode):
    D = entry.diagram()
    C = complex_for(D, QQ, mode)
    degrees = sorted(localized_rank(C))
    for t in (Fraction(1, 4), Fraction(1), Fraction(3, 2)):
        assert gr_t_of_diagram(C, t, D) == oracle_gr_t(C, t, degrees)
    for t in (Fraction(0), Fraction(2)):
        assert gr_t_of_diagram(C, t, D, cap=2) == oracle_gr_t(C, t, degrees, cap=2)


@pytest.mark.parametrize("entry", ORACLE_SET, ids=lambda e: e.name)
def test_search_without_diagram_hint(entry):
    # with no floor and no degree hint the search still finds the same value
    D = entry.diagram()
    C = complex_for(D, F2)
    for t in (Fraction(1, 2), Fraction(1)):
        assert gr_t_of_diagram(C, t) == gr_t_of_diagram(C, t, D)


def test_reduced_search_matches_oracle():
    D = trefoil()
    for p in D.edges:
        R = reduced_subcomplex(build_cube(D, QQ), D, p)
        for t in (Fraction(1, 2), Fraction(1)):
            assert gr_t_of_diagram(R, t, D, basepoint=p) == oracle_gr_t(R, t, [0]) == 2


@pytest.mark.parametrize("D,value", [(unknot(), 1), (trefoil(), 3), (torus_3_m4(), -5)],
                         ids=["unknot", "trefoil", "T(3,-4)"])
def test_gr_t_values(D, value):
    C = complex_for(D, F2)
    for t in INTERIOR:
        assert gr_t_of_diagram(C, t, D) == value


def test_endpoints():
    C = complex_for(unknot(), F2)
    assert gr_t_endpoint(C, 0, cap=2, D=unknot()) == (1, True)
    D = trefoil()
    C = complex_for(D, F2)
    for t in (0, 2):
        assert gr_t_endpoint(C, t, D=D) == (3, True)
    assert s_t(D, 0) == 2 <= rasmussen_s_crosscheck(D)
    with pytest.raises(ValueError):
        gr_t_endpoint(C, Fraction(1, 2))


@pytest.mark.parametrize("name", ["unknot", "trefoil", "figure-eight", "trefoil#trefoil", "T(3,-4)"])
def test_endpoint_symmetry_and_s_F(name):
    D = BY_NAME[name].diagram()
    C = complex_for(D, F2)
    a, b = gr_t_endpoint(C, 0, D=D), gr_t_endpoint(C, 2, D=D)
    assert a == b and a[1]
    assert a[0] - 1 <= rasmussen_s_crosscheck(D, C=C)


@pytest.mark.parametrize("name,value", [("unknot", 0), ("trefoil", 2), ("T(3,-4)", -6),
                                        ("figure-eight", 0), ("trefoil#trefoil", 4)])
def test_rasmussen_crosscheck(name, value):
    assert rasmussen_s_crosscheck(BY_NAME[name].diagram()) == value


def test_rasmussen_rejects_links():
    with pytest.raises(DiagramError):
        rasmussen_s_crosscheck(braid_closure([1, 1]))


def test_s_t_values():
    assert s_t(unknot(), Fraction(1, 2)) == 0
    assert s_t(disjoint_union(trefoil(), unknot()), 1) == 3
    assert s_t(torus_3_m4(), Fraction(3, 2)) == -6
    # positive Hopf link: the sup runs over every degree; the top class sits in degree 2
    assert s_t(braid_closure([1, 1]), 1) == 5


def test_s_tilde():
    assert s_tilde_t(unknot().with_basepoint(1), None, Fraction(1, 2)) == 0
    K = one_crossing_unknot()
    for t in QUARTERS:
        assert s_tilde_t(K, K.edges[0], t) == s_tilde_t(unknot(), 1, t) == 0
    D = trefoil()
    for p in D.edges:
        assert s_tilde_t(D, p, 1) <= 4
    with pytest.raises(ValueError):
        s_tilde_t(D, None, 1)


def test_sweeps():
    P = sweep(unknot(), 4)
    assert set(P.values.values()) == {0} and P.symmetric and P.rational
    assert len(P.rows()) == 9 and P.corners() == []
    T4 = sweep(trefoil(), 4)
    T2 = sweep(trefoil(), 2)
    assert set(T4.values.values()) == {2}
    assert all(T4.values[t] == v for t, v in T2.values.items())
    R = sweep(trefoil(), 4, reduced=True)
    assert R.reduced and all(R.values[t] <= T4.values[t] + 2 for t in R.values)
    with pytest.raises(ValueError):
        sweep(unknot(), 0)


def test_sweep_in_parallel():
    serial = sweep(trefoil(), 2)
    assert sweep(trefoil(), 2, workers=2).values == serial.values


def test_profile_flags():
    P = PLProfile(2, {Fraction(0): Fraction(1), Fraction(1, 2): Fraction(3, 2),
                      Fraction(1): Fraction(2), Fraction(3, 2): Fraction(3, 2),
                      Fraction(2): Fraction(1)})
    assert P.symmetric and P.rational
    assert P.corners() == [(Fraction(1, 2), Fraction(3, 2))]
    Q = PLProfile(2, {Fraction(0): Fraction(1), Fraction(2): Fraction(1, 3)})
    assert not Q.symmetric and not Q.rational


def test_search_reports_impossible_floor():
    from equikh.invariant import _search
    C = complex_for(trefoil(), F2)
    with pytest.raises(SearchError):
        _search(C, Fraction(1), 0, Fraction(10))


@settings(max_examples=15)
@given(small_diagrams)
def test_random_profiles(D):
    S = complex_for(D, F2)
    C = build_cube(D, F2)
    for t in (Fraction(1, 2), Fraction(1), Fraction(3, 2)):
        a = gr_t_of_diagram(S, t, D)
        assert a == gr_t_of_diagram(C, t, D)
        assert a == gr_t_of_diagram(S, 2 - t, D)


@settings(max_examples=10)
@given(small_diagrams)
def test_nontorsion_probe_is_monotone_in_level(D):
    # binary search relies on: a hit at lam implies a hit at every lower level
    from equikh.invariant import _Probe
    S = complex_for(D, F2)
    t = Fraction(1, 2)
    for h in localized_rank(S):
        probe = _Probe(S, h, t, None, None)
        cands = probe.candidates(None)
        hits = [probe.hit(lam) for lam in cands]
        assert hits == sorted(hits, reverse=True)
        assert hits[0]
