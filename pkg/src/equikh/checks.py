"""Structural self-checks shared by ``equikh verify`` and the test-suite.

Every check returns a ``Check`` record instead of raising, so a report can
list all failures at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .algebra import F2, QQ, Field, Poly
from .complex import DEFAULT_CUBE_CAP, build_cube, verify_mirror_duality
from .diagram import LinkDiagram
from .frobenius import (AlgebraElem, BASIS_GRADING, comult, counit, deloop_maps, involution,
                        mult, self_dual_iso, unit)
from .invariant import DEFAULT_CAP, rasmussen_s_crosscheck, sweep
from .lee import localized_rank

__all__ = ["Check", "frobenius_axioms", "cobordism_degree_bound", "deloop_roundtrip", "self_duality",
           "diagram_checks", "algebra_checks", "QUARTER_GRID"]

QUARTER_GRID = tuple(Fraction(k, 4) for k in range(9))


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        tail = f"  ({self.detail})" if self.detail else ""
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}{tail}"


def _basis(F: Field) -> list[AlgebraElem]:
    return [AlgebraElem.basis(i, F) for i in (0, 1)]


def _apply_left(f, t: dict, F: Field) -> dict:
    """(f (x) id) on a two-fold tensor, f: A -> A^{(x)2}; result keyed by triples."""
    out: dict = {}
    for (i, j), c in t.items():
        for (l, r), v in f(AlgebraElem.basis(i, F)).items():
            k = (l, r, j)
            out[k] = out.get(k, Poly.zero(F)) + c * v
    return {k: v for k, v in out.items() if v}


def _apply_right(f, t: dict, F: Field) -> dict:
    out: dict = {}
    for (i, j), c in t.items():
        for (l, r), v in f(AlgebraElem.basis(j, F)).items():
            k = (i, l, r)
            out[k] = out.get(k, Poly.zero(F)) + c * v
    return {k: v for k, v in out.items() if v}


def frobenius_axioms(F: Field) -> dict[str, bool]:
    B = _basis(F)
    one = AlgebraElem.one(F)
    r = {}
    r["associative"] = all(mult(mult(a, b), c) == mult(a, mult(b, c)) for a in B for b in B for c in B)
    r["commutative"] = all(mult(a, b) == mult(b, a) for a in B for b in B)
    r["unital"] = all(mult(one, a) == a for a in B)
    r["coassociative"] = all(_apply_left(comult, comult(a), F) == _apply_right(comult, comult(a), F)
                             for a in B)
    r["cocommutative"] = all(comult(a) == {(j, i): v for (i, j), v in comult(a).items()} for a in B)

    def counit_left(a):
        acc = AlgebraElem(Poly.zero(F), Poly.zero(F))
        for (i, j), v in comult(a).items():
            acc = acc + AlgebraElem.basis(j, F) * (counit(AlgebraElem.basis(i, F)) * v)
        return acc
    r["counital"] = all(counit_left(a) == a for a in B)

    def frob(a, b):
        # Delta(ab) = (m (x) id)(a (x) Delta(b))
        lhs = comult(mult(a, b))
        rhs: dict = {}
        for (i, j), v in comult(b).items():
            x = mult(a, AlgebraElem.basis(i, F))
            for k, c in enumerate(x.coeffs()):
                if c:
                    rhs[(k, j)] = rhs.get((k, j), Poly.zero(F)) + c * v
        return lhs == {k: v for k, v in rhs.items() if v}
    r["frobenius_relation"] = all(frob(a, b) for a in B for b in B)
    r["involution_is_involutive"] = all(involution(involution(a)) == a for a in B)
    r["involution_multiplicative"] = all(
        involution(mult(a, b)) == mult(involution(a), involution(b)) for a in B for b in B)
    r["counit_antiinvariant"] = all(counit(involution(a)) == -counit(a) for a in B)
    return r


def _grt_alg(a: AlgebraElem, t: Fraction) -> Fraction:
    vals = [BASIS_GRADING[i] - t * m - (2 - t) * n
            for i, c in enumerate(a.coeffs()) for (m, n) in c.terms]
    return min(vals) if vals else Fraction(10 ** 9)


def _grt_poly(p: Poly, shift: int, t: Fraction) -> list[Fraction]:
    return [shift - t * m - (2 - t) * n for (m, n) in p.terms]


def cobordism_degree_bound(F: Field, ts: Iterable[Fraction] = QUARTER_GRID) -> bool:
    """gr_t(output) >= gr_t(input) + chi for unit, counit, merge and split on basis inputs."""
    B = _basis(F)
    ones = [Poly.one(F), Poly.U(F), Poly.V(F), Poly.U(F) * Poly.V(F)]
    for t in ts:
        for r in ones:
            base = min(_grt_poly(r, 0, t))
            if _grt_alg(unit(r), t) < base + 1:
                return False
            for a in B:
                ra = a * r
                z = _grt_alg(ra, t)
                if any(g < z + 1 for g in _grt_poly(counit(ra), 0, t)):
                    return False
                for (i, j), v in comult(ra).items():
                    if any(g < z - 1 for g in _grt_poly(v, BASIS_GRADING[i] + BASIS_GRADING[j], t)):
                        return False
                for b in B:
                    zab = z + BASIS_GRADING[B.index(b)]
                    if _grt_alg(mult(ra, b), t) < zab - 1:
                        return False
    return True


def deloop_roundtrip(F: Field) -> bool:
    split, merge = deloop_maps(F)
    U, V = Poly.U(F), Poly.V(F)
    samples = _basis(F) + [AlgebraElem(U, V), AlgebraElem(U * V, U + V)]
    if not all(merge(split(a)) == a for a in samples):
        return False
    pairs = [(Poly.one(F), Poly.zero(F)), (Poly.zero(F), Poly.one(F)), (U, V * V)]
    return all(split(merge(p)) == p for p in pairs)


def self_duality(F: Field) -> bool:
    try:
        return self_dual_iso(F).ok
    except AssertionError:
        return False


def algebra_checks(fields: Iterable[Field] = (F2, QQ)) -> list[Check]:
    out = []
    for F in fields:
        ax = frobenius_axioms(F)
        bad = [k for k, v in ax.items() if not v]
        out.append(Check(f"frobenius axioms over {F.name}", not bad, ", ".join(bad)))
        out.append(Check(f"gr_t degree bound for elementary cobordisms over {F.name}", cobordism_degree_bound(F)))
        out.append(Check(f"delooping round-trip over {F.name}", deloop_roundtrip(F)))
        out.append(Check(f"self-duality intertwiner over {F.name}", self_duality(F)))
    return out


def diagram_checks(D: LinkDiagram, field_: Field = F2, q: int = 4, cap: int = DEFAULT_CAP,
                   max_crossings: int = DEFAULT_CUBE_CAP, oracle_crossings: int = 6) -> list[Check]:
    """Complex-level checks for one diagram; heavier ones only on small diagrams."""
    from .scan import scan_reduce

    out: list[Check] = []
    k = D.num_components
    S, trace = scan_reduce(D, field_, trace=D.n <= 6)
    ok = S.check_d_squared() and S.check_homogeneous()
    out.append(Check("scanned complex: d^2 = 0 and gr_q-homogeneous", ok))
    if trace.tracked:
        out.append(Check("scan homotopy equivalence maps", trace.verify(S)))
    ranks = localized_rank(S)
    out.append(Check("localized rank is 2^components", sum(ranks.values()) == 2 ** k,
                     f"total {sum(ranks.values())}, by degree {dict(sorted(ranks.items()))}"))
    C = None
    if D.n <= max_crossings:
        C = build_cube(D, field_, max_crossings)
        out.append(Check("cube complex: d^2 = 0 and gr_q-homogeneous",
                         C.check_d_squared() and C.check_homogeneous()))
    prof = sweep(D, q, field_=field_, cap=cap, C=S)
    out.append(Check("profile symmetry s_t = s_(2-t)", prof.symmetric))
    out.append(Check("profile values in (1/q)Z", prof.rational))
    out.append(Check("endpoint caps stabilized", all(prof.stable.values())))
    if C is not None and D.n <= oracle_crossings:
        cube_prof = sweep(D, q, field_=field_, cap=cap, C=C)
        out.append(Check("cube and scan profiles agree", cube_prof.values == prof.values))
    if k == 1:
        sF = rasmussen_s_crosscheck(D, field_, C=S)
        s0 = prof.values[Fraction(0)]
        out.append(Check("s_0 = s_2 <= s_F", s0 == prof.values[Fraction(2)] and s0 <= sF,
                         f"s_0 = {s0}, s_F = {sF}"))
        p = D.basepoint if D.basepoint is not None else D.default_basepoint()
        red = sweep(D, q, reduced=True, field_=field_, basepoint=p, cap=cap)
        ok = all(red.values[t] <= prof.values[t] + 2 for t in prof.values)
        out.append(Check("reduced profile bounded by s_t + 2", ok))
    if D.n <= oracle_crossings:
        for F in (QQ,) if field_ == F2 else (field_,):
            out.append(Check(f"mirror duality over {F.name}", bool(verify_mirror_duality(D, F))))
            if D.n and k == 1:
                out.append(Check(f"reduced mirror duality over {F.name}",
                                 bool(verify_mirror_duality(D, F, reduced=True))))
    return out
