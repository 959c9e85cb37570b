"""The gr_t filtration, the profiles s_t and s~_t, and the s_F cross-check.

For a generator g and monomial U^m V^n,

    gr_t(U^m V^n g) = gr_q(g) - t*m - (2-t)*n.

gr_t(D) is the largest gr_t of a nontorsion cycle.  Because torsion is a
graded submodule and d preserves gr_q, it suffices to look at cycles of a
single quantum degree Q = gr_q(g) - 2(m+n); inside such a block the
truncation {gr_t >= lam} is a finite F-vector space, so the question "is some
cycle of the truncation nontorsion" is plain linear algebra over F.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import F2, Field, Poly
from .complex import DEFAULT_CUBE_CAP, GradedChainComplex, build_cube, reduced_subcomplex
from .diagram import DiagramError, LinkDiagram, checkerboard_labels
from .lee import all_orientations, torsion_functionals
from .sparse import Eliminator

__all__ = [
    "RationalT", "Truncation", "PLProfile", "SearchError", "parse_t", "gr_t_of_chain",
    "truncate", "gr_t_of_diagram", "gr_t_endpoint", "s_t", "s_tilde_t", "sweep",
    "rasmussen_s_crosscheck", "complex_for", "point_value", "DEFAULT_CAP",
]

RationalT = Fraction
DEFAULT_CAP = 4


class SearchError(RuntimeError):
    """The gr_t search ran past a proven lower bound (signals a bug)."""


def parse_t(t, max_den: int | None = None) -> Fraction:
    if isinstance(t, str):
        try:
            t = Fraction(t.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"bad t value {t!r}") from None
    t = Fraction(t)
    if not 0 <= t <= 2:
        raise ValueError(f"t = {t} is outside [0, 2]")
    if max_den is not None and t.denominator > max_den:
        raise ValueError(f"t = {t} has denominator above {max_den}")
    return t


def _grt(grq: int, m: int, n: int, t: Fraction) -> Fraction:
    return grq - t * m - (2 - t) * n


def gr_t_of_chain(z, t, gens: Sequence | None = None):
    """Smallest gr_t over the homogeneous summands of z; +inf for z = 0.

    ``z`` maps generators (anything with ``grq``) or indices into ``gens`` to
    polynomials.
    """
    t = parse_t(t)
    best = math.inf
    for key, p in z.items():
        grq = gens[key].grq if gens is not None else key.grq
        for (m, n) in p.terms:
            v = _grt(grq, m, n, t)
            if v < best:
                best = v
    return best


# ---------------------------------------------------------------------------
# truncations

@dataclass
class Truncation:
    degree: int
    level: Fraction
    t: Fraction
    basis: list[tuple[int, int, int]]          # (generator index, m, n)
    matrix: list[dict]                          # column per basis element: (i, m, n) -> coeff


def _pairs(gens, t: Fraction, lam: Fraction, cap_u: int | None, cap_v: int | None):
    for i, g in enumerate(gens):
        budget = g.grq - lam
        if budget < 0:
            continue
        mmax = cap_u if t == 0 else math.floor(budget / t)
        if t == 0 and cap_u is None:
            raise ValueError("t = 0 needs a cap on the U exponent")
        for m in range(mmax + 1):
            rest = budget - t * m
            if rest < 0:
                break
            if t == 2:
                if cap_v is None:
                    raise ValueError("t = 2 needs a cap on the V exponent")
                nmax = cap_v
            else:
                nmax = math.floor(rest / (2 - t))
            for n in range(nmax + 1):
                yield i, m, n


def _image(C: GradedChainComplex, h: int, i: int, m: int, n: int) -> dict:
    out = {}
    for k, p in C.column(h, i).items():
        for (a, b), c in p.terms.items():
            out[(k, m + a, n + b)] = c
    return out


def truncate(C: GradedChainComplex, t, lam, h: int, cap: int | None = None) -> Truncation:
    """F-basis of {gr_t >= lam} in degree h and the differential restricted to it."""
    t, lam = parse_t(t), Fraction(lam)
    gens = C.gens.get(h, [])
    basis = list(_pairs(gens, t, lam, cap, cap))
    return Truncation(h, lam, t, basis, [_image(C, h, i, m, n) for i, m, n in basis])


class _Probe:
    """Answers "does F^t_lam in degree h hold a nontorsion cycle" for one complex."""

    def __init__(self, C: GradedChainComplex, h: int, t: Fraction, cap_u, cap_v):
        self.C, self.h, self.t = C, h, t
        self.cap_u, self.cap_v = cap_u, cap_v
        self.L = torsion_functionals(C, h)
        # generator index -> list of (functional index, n-shift, coeff)
        by_gen: dict[int, list] = {}
        for k, vec in enumerate(self.L):
            for i, p in vec.items():
                for (_, b), c in p.terms.items():
                    by_gen.setdefault(i, []).append((k, b, c))
        self.by_gen = by_gen
        self.calls = 0

    def candidates(self, floor: Fraction | None) -> list[Fraction]:
        gens = self.C.gens.get(self.h, [])
        lo = floor if floor is not None else self._lowest()
        vals = {_grt(gens[i].grq, m, n, self.t)
                for i, m, n in _pairs(gens, self.t, lo, self.cap_u, self.cap_v)}
        return sorted(vals)

    def _lowest(self) -> Fraction:
        gens = self.C.gens.get(self.h, [])
        if not gens:
            return Fraction(0)
        # every nontorsion class has a representative inside this window
        span = 2 * (max(g.grq for g in gens) - min(g.grq for g in gens)) + 4
        return Fraction(min(g.grq for g in gens) - span)

    def hit(self, lam: Fraction) -> bool:
        self.calls += 1
        C, h = self.C, self.h
        gens = C.gens.get(h, [])
        blocks: dict[int, list] = {}
        for i, m, n in _pairs(gens, self.t, lam, self.cap_u, self.cap_v):
            blocks.setdefault(gens[i].grq - 2 * (m + n), []).append((i, m, n))
        for Q in sorted(blocks, reverse=True):
            el = Eliminator(C.field)
            for i, m, n in blocks[Q]:
                payload = {}
                for k, b, c in self.by_gen.get(i, ()):
                    key = (k, n + b)
                    payload[key] = payload.get(key, 0) + c
                res = el.add(_image(C, h, i, m, n), payload)
                if res:
                    return True
        return False


def _search(C: GradedChainComplex, t: Fraction, h: int, floor: Fraction | None,
            cap_u=None, cap_v=None) -> Fraction | None:
    """Largest lam with a nontorsion cycle in F^t_lam (degree h); None if none."""
    if h not in C.gens:
        return None
    probe = _Probe(C, h, t, cap_u, cap_v)
    if not probe.L:
        return None
    cands = probe.candidates(floor)
    if not cands or not probe.hit(cands[0]):
        if floor is None:
            return None
        raise SearchError(f"no nontorsion cycle at the proven floor {floor} (t={t}, h={h})")
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if probe.hit(cands[mid]):
            lo = mid
        else:
            hi = mid - 1
    return cands[lo]


# ---------------------------------------------------------------------------
# floors from lifted Lee generators

def _lift_floors(D: LinkDiagram, t: Fraction, basepoint: int | None) -> dict[int, Fraction]:
    """Per homological degree, the best gr_t among lifted canonical generators."""
    a_cost = min(Fraction(-1), 1 - t)   # X - U
    b_cost = min(Fraction(-1), t - 1)   # V - X
    shift = D.n_plus - 2 * D.n_minus
    out: dict[int, Fraction] = {}
    for o in all_orientations(D):
        lab = checkerboard_labels(D, o, basepoint=basepoint)
        res = lab.resolution
        w = sum(res.vertex)
        val = Fraction(w + shift)
        for i, tag in enumerate(lab.tags):
            if basepoint is not None and basepoint in res.circles[i]:
                continue  # reduced generator, gr_q 0 after the shift
            val += a_cost if tag == "a" else b_cost
        h = w - D.n_minus
        if h not in out or val > out[h]:
            out[h] = val
    return out


def gr_t_of_diagram(C: GradedChainComplex, t, D: LinkDiagram | None = None,
                    basepoint: int | None = None, cap: int = DEFAULT_CAP) -> Fraction:
    """max gr_t of a nontorsion cycle.

    With ``D`` the search is limited to the degrees of the canonical
    generators (degree 0 for knots) and starts from their lifted gr_t.  For
    t in {0, 2} the unbounded exponent is capped at ``cap``.
    """
    t = parse_t(t)
    caps = (cap if t == 0 else None, cap if t == 2 else None)
    if D is not None:
        floors = _lift_floors(D, t, basepoint)
        results = [_search(C, t, h, f, *caps) for h, f in sorted(floors.items())]
    else:
        from .lee import localized_rank
        results = [_search(C, t, h, None, *caps) for h in sorted(localized_rank(C))]
    results = [r for r in results if r is not None]
    if not results:
        raise SearchError("complex has no nontorsion cycles")
    return max(results)


def gr_t_endpoint(C: GradedChainComplex, t, cap: int = DEFAULT_CAP, D: LinkDiagram | None = None,
                  basepoint: int | None = None) -> tuple[Fraction, bool]:
    """Capped search at t = 0 or 2; rerun at cap + 2 and report whether it moved."""
    t = parse_t(t)
    if t not in (0, 2):
        raise ValueError("endpoint search is for t = 0 or t = 2")
    a = gr_t_of_diagram(C, t, D, basepoint, cap)
    b = gr_t_of_diagram(C, t, D, basepoint, cap + 2)
    return b, a == b


# ---------------------------------------------------------------------------
# front ends

def complex_for(D: LinkDiagram, field_: Field = F2, mode: str = "scan",
                basepoint: int | None = None, max_crossings: int = DEFAULT_CUBE_CAP
                ) -> GradedChainComplex:
    if mode == "cube":
        C = build_cube(D, field_, max_crossings)
        if basepoint is not None:
            C = reduced_subcomplex(C, D, basepoint)
        return C
    if mode != "scan":
        raise ValueError(f"unknown mode {mode!r}")
    from .scan import scan_reduce
    return scan_reduce(D, field_, basepoint=basepoint, trace=False)[0]


def point_value(D: LinkDiagram, t, C: GradedChainComplex, basepoint: int | None = None,
                cap: int = DEFAULT_CAP) -> tuple[Fraction, bool]:
    """gr_t (reduced when ``basepoint`` is set) and whether the endpoint caps agreed."""
    t = parse_t(t)
    if t in (0, 2):
        return gr_t_endpoint(C, t, cap, D, basepoint)
    return gr_t_of_diagram(C, t, D, basepoint, cap), True


def s_t(D: LinkDiagram, t, field_: Field = F2, mode: str = "scan", cap: int = DEFAULT_CAP,
        C: GradedChainComplex | None = None) -> Fraction:
    t = parse_t(t)
    C = C if C is not None else complex_for(D, field_, mode)
    return point_value(D, t, C, None, cap)[0] - 1


def s_tilde_t(D: LinkDiagram, basepoint: int | None, t, field_: Field = F2, mode: str = "scan",
              cap: int = DEFAULT_CAP, C: GradedChainComplex | None = None,
              check_bound: bool = True) -> Fraction:
    """Reduced profile value (no shift); optionally checks it is at most s_t + 2."""
    p = basepoint if basepoint is not None else D.basepoint
    if p is None:
        raise ValueError("s~_t needs a basepoint")
    t = parse_t(t)
    C = C if C is not None else complex_for(D, field_, mode, basepoint=p)
    val = point_value(D, t, C, p, cap)[0]
    if check_bound:
        full = s_t(D, t, field_, mode, cap)
        if val > full + 2:
            raise SearchError(f"s~_t = {val} exceeds s_t + 2 = {full + 2}")
    return val


@dataclass
class PLProfile:
    q: int
    values: dict[Fraction, Fraction]
    reduced: bool = False
    stable: dict[Fraction, bool] = field(default_factory=dict)

    @property
    def symmetric(self) -> bool:
        return all(self.values[t] == self.values[2 - t] for t in self.values if 2 - t in self.values)

    @property
    def rational(self) -> bool:
        return all((v * self.q).denominator == 1 for v in self.values.values())

    def rows(self) -> list[tuple[Fraction, Fraction]]:
        return sorted(self.values.items())

    def corners(self) -> list[tuple[Fraction, Fraction]]:
        """Grid intervals where the slope changes (exact corners are not located)."""
        pts = self.rows()
        out = []
        for (t0, v0), (t1, v1), (t2, v2) in zip(pts, pts[1:], pts[2:]):
            if (v1 - v0) / (t1 - t0) != (v2 - v1) / (t2 - t1):
                out.append((t0, t2))
        return out


def _sweep_one(args):
    D, t, C, basepoint, cap = args
    return t, point_value(D, t, C, basepoint, cap)


def threads_from_env() -> int:
    try:
        return max(1, int(os.environ.get("EQUIKH_THREADS", "1")))
    except ValueError:
        return 1


def sweep(D: LinkDiagram, q: int = 8, reduced: bool = False, field_: Field = F2,
          mode: str = "scan", basepoint: int | None = None, cap: int = DEFAULT_CAP,
          C: GradedChainComplex | None = None, workers: int | None = None) -> PLProfile:
    """Evaluate s_t (or s~_t) at t = k/q for k = 0..2q."""
    if q < 1:
        raise ValueError("grid denominator must be positive")
    p = None
    if reduced:
        p = basepoint if basepoint is not None else (D.basepoint or D.default_basepoint())
    C = C if C is not None else complex_for(D, field_, mode, basepoint=p)
    ts = [Fraction(k, q) for k in range(2 * q + 1)]
    jobs = [(D, t, C, p, cap) for t in ts]
    workers = workers if workers is not None else threads_from_env()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_sweep_one, jobs))
    else:
        results = [_sweep_one(j) for j in jobs]
    shift = 0 if reduced else 1
    values = {t: v - shift for t, (v, _) in results}
    stable = {t: ok for t, (_, ok) in results if t in (0, 2)}
    return PLProfile(q, values, reduced, stable)


def rasmussen_s_crosscheck(D: LinkDiagram, field_: Field = F2, mode: str = "scan",
                           C: GradedChainComplex | None = None) -> int:
    """s_F from the U = 0 specialization, a graded Bar-Natan complex over F[V]."""
    if D.num_components != 1:
        raise DiagramError("the s_F cross-check needs a knot")
    C = C if C is not None else complex_for(D, field_, mode)
    B = C.set_u_zero()
    lab = checkerboard_labels(D)
    floor = Fraction(D.writhe - len(lab.tags))
    val = _search(B, Fraction(0), 0, floor, cap_u=0)
    if val is None:
        raise SearchError("no nontorsion class after setting U = 0")
    return int(val) - 1
