"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) for just the summary lines.
"""

from __future__ import annotations

import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from equikh.algebra import F2, QQ, Field
from equikh.checks import algebra_checks
from equikh.complex import build_cube, verify_mirror_duality
from equikh.corpus import BY_NAME, CORPUS, grid, one_crossing_unknot, torus_3_m4, trefoil
from equikh.diagram import braid_closure, unknot, unlink
from equikh.invariant import complex_for, rasmussen_s_crosscheck, s_t, sweep
from equikh.lee import localized_rank
from equikh.scan import scan_reduce

GRID = grid(8)
KNOTS = [e for e in CORPUS if e.knot]


def _report(n: int, ok: bool, what: str, capsys=None) -> None:
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {what}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)


def _vals(vs) -> str:
    return ", ".join(str(v) for v in sorted(set(vs)))


def criterion_1():
    start = time.perf_counter()
    a = sweep(unknot(), 8).values
    b = sweep(one_crossing_unknot(), 8).values
    elapsed = time.perf_counter() - start
    ok = set(a.values()) == {0} and a == b and elapsed < 1.0
    return ok, f"unknot s_t = 0 on the 1/8 grid, both diagrams, {elapsed:.2f}s"


def criterion_2():
    start = time.perf_counter()
    D = trefoil()
    prof = sweep(D, 8)
    sF = rasmussen_s_crosscheck(D)
    elapsed = time.perf_counter() - start
    ok = (set(prof.values.values()) == {2} and sF == 2 and prof.stable.get(Fraction(0)) is True
          and prof.values[Fraction(0)] == 2 and elapsed < 10)
    return ok, f"trefoil s_t = 2, s_F = {sF}, s_0 stable, {elapsed:.2f}s"


def criterion_3():
    start = time.perf_counter()
    D = torus_3_m4()
    C = complex_for(D, F2, "scan")
    ts = [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)]
    vals = [s_t(D, t, F2, C=C) for t in ts]
    elapsed = time.perf_counter() - start
    ok = vals == [-6] * 5 and elapsed < 600
    return ok, f"T(3,-4) s_t = {_vals(vals)} at 0, 1/2, 1, 3/2, 2 over F2, {elapsed:.2f}s"


def criterion_4():
    cases = {"unknot": (unknot(), 2), "trefoil": (trefoil(), 2),
             "hopf": (braid_closure([1, 1]), 4), "unlink-2": (unlink(2), 4)}
    got = {}
    ok = True
    for name, (D, want) in cases.items():
        for C in (build_cube(D, F2), scan_reduce(D, F2)[0]):
            r = localized_rank(C)
            got[name] = sum(r.values())
            ok &= got[name] == want
            if name == "trefoil":
                ok &= set(r) == {0}
    return ok, f"localized ranks {got}"


def criterion_5():
    bad = []
    for e in CORPUS:
        v = sweep(e.diagram(), 8).values
        if any(v[t] != v[2 - t] for t in GRID):
            bad.append(e.name)
    return not bad, f"s_(k/8) = s_((16-k)/8) on {len(CORPUS)} corpus diagrams" + (
        f"; asymmetric: {bad}" if bad else "")


def criterion_6():
    v = sweep(BY_NAME["trefoil+unknot"].diagram(), 8).values
    return set(v.values()) == {3}, f"trefoil + unknot s_t = {_vals(v.values())}"


def criterion_7():
    D = BY_NAME["trefoil#trefoil"].diagram()
    vals = {t: s_t(D, t) for t in (Fraction(1, 2), Fraction(1), Fraction(3, 2))}
    ok = all(abs(v - 5) <= 1 for v in vals.values())
    return ok, f"trefoil # trefoil s_t = {_vals(vals.values())}, within 1 of 5"


def criterion_8():
    failures = [c.name for c in algebra_checks((F2, QQ, Field(3))) if not c.ok]
    n_complexes = 0
    for e in CORPUS:
        D = e.diagram()
        cs = [scan_reduce(D, F2)[0], scan_reduce(D, QQ)[0]]
        if D.n <= 8:
            cs.append(build_cube(D, F2))
        for C in cs:
            n_complexes += 1
            if not (C.check_d_squared() and C.check_homogeneous()):
                failures.append(f"complex of {e.name}")
    for D, name in ((unknot(), "unknot"), (trefoil(), "trefoil")):
        for F in (F2, QQ):
            if not verify_mirror_duality(D, F):
                failures.append(f"mirror duality {name} {F.name}")
        K = D if D.n else one_crossing_unknot()
        for F in (F2, QQ):
            if not verify_mirror_duality(K, F, reduced=True, basepoint=K.edges[0]):
                failures.append(f"reduced mirror duality {name} {F.name}")
    return not failures, (f"algebra axioms, gr_t degree bound, delooping, self-duality, "
                          f"d^2 = 0 on {n_complexes} complexes, mirror duality"
                          + (f"; failed: {failures}" if failures else ""))


def criterion_9():
    bad, n = [], 0
    for e in CORPUS:
        D = e.diagram()
        if D.n > 6:
            continue
        n += 1
        a = sweep(D, 8, C=build_cube(D, F2)).values
        b = sweep(D, 8, C=scan_reduce(D, F2)[0]).values
        if a != b:
            bad.append(e.name)
    return not bad, f"cube and scan profiles agree on {n} diagrams" + (
        f"; differ: {bad}" if bad else "")


def criterion_10():
    a = sweep(unknot().with_basepoint(1), 8, reduced=True).values
    K = one_crossing_unknot()
    b = sweep(K, 8, reduced=True, basepoint=K.edges[0]).values
    ok = a == b
    bad = []
    for e in KNOTS:
        D = e.diagram()
        full = sweep(D, 8).values
        p = D.edges[0] if D.n else 1
        red = sweep(D, 8, reduced=True, basepoint=p).values
        if any(red[t] > full[t] + 2 for t in GRID):
            bad.append(e.name)
    ok &= not bad
    return ok, f"based unknots agree (s~_t = {_vals(a.values())}); s~_t <= s_t + 2 on {len(KNOTS)} knots" + (
        f"; violated: {bad}" if bad else "")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("n", range(1, 11), ids=lambda n: f"criterion_{n}")
def test_criterion(n, capsys):
    ok, what = CRITERIA[n - 1]()
    _report(n, ok, what, capsys)
    assert ok, what


if __name__ == "__main__":
    results = []
    for i, fn in enumerate(CRITERIA, 1):
        ok, what = fn()
        _report(i, ok, what)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
