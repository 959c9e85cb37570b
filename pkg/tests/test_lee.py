from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from equikh.algebra import F2, QQ, Poly, ffge_rank
from equikh.complex import build_cube, reduced_subcomplex
from equikh.corpus import CORPUS, trefoil
from equikh.diagram import braid_closure, resolve, unknot
from equikh.invariant import gr_t_of_chain
from equikh.lee import (all_orientations, canonical_generator, dehomogenize, gamma_class,
                        is_nontorsion,
                        lift_tilde, localized_rank, reduced_lift, torsion_functionals)
from oracles import is_boundary_generic, oracle_localized_rank
from strategies import polys

SMALL = [e for e in CORPUS if e.diagram().n <= 4]


def _involution_on_chain(D, terms: dict, F) -> dict:
    """Apply X -> U + V - X on every circle of a cube chain."""
    U, V = Poly.U(F), Poly.V(F)
    out: dict = {}
    for (u, mask), c in terms.items():
        parts = {mask: c}
        for k in range(len(resolve(D, u).circles)):
            nxt: dict = {}
            for m, p in parts.items():
                images = ((m & ~(1 << k), p * (U + V)), (m, -p)) if (m >> k) & 1 else ((m, p),)
                for mm, pp in images:
                    nxt[mm] = nxt.get(mm, Poly.zero(F)) + pp
            parts = nxt
        for m, p in parts.items():
            out[(u, m)] = out.get((u, m), Poly.zero(F)) + p
    return {k: v for k, v in out.items() if v}


@pytest.mark.parametrize("entry", SMALL, ids=lambda e: e.name)
@pytest.mark.parametrize("F", [F2, QQ], ids=lambda F: F.name)
def test_lifts_are_nontorsion_cycles(entry, F):
    D = entry.diagram()
    C = build_cube(D, F)
    for o in all_orientations(D):
        z = lift_tilde(D, o, F)
        chain = z.chain(C)
        assert not C.apply_d(z.degree, chain)
        assert is_nontorsion(C, chain, z.degree)


@pytest.mark.parametrize("entry", SMALL, ids=lambda e: e.name)
def test_lifts_form_a_localized_basis(entry):
    D = entry.diagram()
    C = build_cube(D, QQ)
    by_degree: dict[int, list] = {}
    for o in all_orientations(D):
        z = lift_tilde(D, o, QQ)
        by_degree.setdefault(z.degree, []).append(z.chain(C))
    total = 0
    for h, zs in by_degree.items():
        rows = [[z.get(i, Poly.zero(QQ)) for z in zs] for i in range(C.size(h))]
        total += ffge_rank(rows)
    assert total == 2 ** D.num_components
    # the degrees carrying lifts are exactly those with localized homology
    assert set(by_degree) == set(localized_rank(C))


@pytest.mark.parametrize("entry", SMALL, ids=lambda e: e.name)
@pytest.mark.parametrize("F", [F2, QQ], ids=lambda F: F.name)
def test_involution_swaps_orientations(entry, F):
    D = entry.diagram()
    for o in all_orientations(D):
        obar = tuple(not x for x in o)
        a = _involution_on_chain(D, lift_tilde(D, o, F).terms, F)
        b = lift_tilde(D, obar, F).terms
        neg = {k: -v for k, v in b.items()}
        if F == F2:
            assert a == b
        else:
            assert a in (b, neg)


@pytest.mark.parametrize("entry", SMALL, ids=lambda e: e.name)
def test_localized_ranks_match_oracle(entry):
    C = build_cube(entry.diagram(), QQ)
    assert localized_rank(C) == oracle_localized_rank(C)


@pytest.mark.parametrize("name,ranks", [("unknot", {0: 2}), ("trefoil", {0: 2}),
                                        ("hopf", {0: 2, 2: 2}), ("unlink-2", {0: 4})])
def test_frozen_localized_ranks(name, ranks):
    entry = next(e for e in CORPUS if e.name == name)
    assert localized_rank(build_cube(entry.diagram(), F2)) == ranks


def test_canonical_generator_labels():
    g = canonical_generator(trefoil())
    assert g.vertex == (0, 0, 0) and g.labels == ("e1", "e2")
    assert canonical_generator(unknot()).labels == ("e1",)


def test_reduced_lift():
    D = trefoil()
    for p in D.edges:
        R = reduced_subcomplex(build_cube(D, QQ), D, p)
        for o in all_orientations(D):
            z = reduced_lift(D, o, p, QQ)
            chain = z.chain(R)
            assert not R.apply_d(z.degree, chain)
            assert is_nontorsion(R, chain, z.degree)


def test_gamma_class_on_trefoil():
    D = trefoil()
    C = build_cube(D, QQ)
    g = gamma_class(D, field_=QQ)
    one = Poly.one(QQ)
    assert g.terms == {((0, 0, 0), 0b01): one, ((0, 0, 0), 0b10): -one}
    chain = g.chain(C)
    assert not C.apply_d(0, chain)
    assert is_nontorsion(C, chain, 0)
    for k in range(9):
        assert gr_t_of_chain(chain, Fraction(k, 4), C.gens[0]) == 3


def test_gamma_needs_positive_diagram():
    with pytest.raises(ValueError):
        gamma_class(next(e for e in CORPUS if e.name == "figure-eight").diagram())


def test_non_cycle_rejected():
    C = build_cube(trefoil(), QQ)
    with pytest.raises(ValueError):
        is_nontorsion(C, {0: Poly.one(QQ)}, 0)


def _hopf_degree_two():
    D = braid_closure([1, 1])
    C = build_cube(D, QQ)
    lift = next(z for z in (lift_tilde(D, o, QQ) for o in all_orientations(D)) if z.degree == 2)
    return D, C, lift.chain(C)


def _pair(vec: dict, chain: dict) -> Poly:
    acc = Poly.zero(QQ)
    for i, p in chain.items():
        if i in vec:
            acc = acc + vec[i] * dehomogenize(p)
    return acc


def test_torsion_functionals_detect_boundaries():
    D, C, z = _hopf_degree_two()
    L = torsion_functionals(C, 2)
    assert L
    for j in range(C.size(1)):
        b = C.column(1, j)
        assert all(not _pair(vec, b) for vec in L)
    assert any(_pair(vec, z) for vec in L)


@given(st.lists(polys(QQ), min_size=1, max_size=4))
def test_nontorsion_is_invariant_under_boundaries(coeffs):
    D, C, z = _hopf_degree_two()
    w = {j: c for j, c in enumerate(coeffs[:C.size(1)]) if c}
    b = C.apply_d(1, w)
    if b:
        assert not is_nontorsion(C, b, 2)
        assert is_boundary_generic(C, b, 2)
    shifted = dict(z)
    for i, p in b.items():
        v = shifted.get(i, Poly.zero(QQ)) + p
        if v:
            shifted[i] = v
        else:
            shifted.pop(i, None)
    assert is_nontorsion(C, shifted, 2)
    assert not is_boundary_generic(C, shifted, 2)
