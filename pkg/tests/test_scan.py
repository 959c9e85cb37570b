import pytest
from hypothesis import given, settings

from equikh.algebra import F2, QQ, Field
from equikh.complex import build_cube, reduced_subcomplex
from equikh.corpus import CORPUS, torus_3_m4, trefoil
from equikh.diagram import braid_closure
from equikh.lee import is_nontorsion, lift_tilde, localized_rank
from equikh.scan import scan_reduce
from oracles import oracle_localized_rank
from strategies import small_diagrams
from test_complex import euler, state_sum_euler

SMALL = [e for e in CORPUS if e.diagram().n <= 6]


@pytest.mark.parametrize("entry", SMALL, ids=lambda e: e.name)
@pytest.mark.parametrize("F", [F2, QQ], ids=lambda F: F.name)
def test_scan_is_homotopy_equivalent_to_cube(entry, F):
    D = entry.diagram()
    S, trace = scan_reduce(D, F, trace=True)
    assert S.check_d_squared() and S.check_homogeneous()
    assert trace.tracked and trace.verify(S)
    assert euler(S) == euler(trace.cube)
    assert localized_rank(S) == localized_rank(trace.cube)


@pytest.mark.parametrize("entry", SMALL, ids=lambda e: e.name)
def test_reduced_scan(entry):
    D = entry.diagram()
    p = D.edges[-1]
    S, trace = scan_reduce(D, QQ, basepoint=p, trace=True)
    R = reduced_subcomplex(build_cube(D, QQ), D, p)
    assert euler(S) == euler(R)
    assert trace.verify(S)
    assert localized_rank(S) == localized_rank(R)


def test_lee_cycle_survives_transport():
    D = trefoil()
    S, trace = scan_reduce(D, QQ, trace=True)
    z = lift_tilde(D, field_=QQ)
    chain = z.chain(trace.cube)
    pushed = trace.push(chain, z.degree)
    assert not S.apply_d(z.degree, pushed)
    assert is_nontorsion(S, pushed, z.degree)


def test_torus_knot_scan():
    D = torus_3_m4()
    S, _ = scan_reduce(D, F2)
    assert {h: len(g) for h, g in S.gens.items()} == {-5: 2, -4: 2, -3: 2, -2: 2, 0: 2}
    assert euler(S) == state_sum_euler(D)
    assert localized_rank(S) == {0: 2}


def test_scan_over_odd_characteristic():
    D = braid_closure([1, -2, 1, -2])
    S, trace = scan_reduce(D, Field(3), trace=True)
    assert trace.verify(S)
    assert oracle_localized_rank(scan_reduce(D, QQ)[0]) == localized_rank(S)


@settings(max_examples=25)
@given(small_diagrams)
def test_random_scans(D):
    S, trace = scan_reduce(D, F2, trace=True)
    assert S.check_d_squared() and S.check_homogeneous()
    assert trace.verify(S)
    assert euler(S) == state_sum_euler(D)
    assert sum(localized_rank(S).values()) == 2 ** D.num_components
