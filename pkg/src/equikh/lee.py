"""Canonical Lee generators, their lifts to the cube, and torsion tests."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .algebra import F2, Field, Poly, divide_exact, ffge_rank, in_column_span, left_kernel, vu_divisibility
from .complex import GradedChainComplex
from .diagram import LinkDiagram, checkerboard_labels

__all__ = [
    "LeeGenerator", "LiftedGenerator", "canonical_generator", "lift_tilde",
    "reduced_canonical_generator", "reduced_lift", "is_nontorsion", "localized_rank",
    "gamma_class", "dehomogenize", "torsion_functionals", "all_orientations",
]


@dataclass(frozen=True)
class LeeGenerator:
    """Oriented resolution with e1/e2 per Seifert circle (circles sorted by smallest edge)."""

    vertex: tuple[int, ...]
    labels: tuple[str, ...]
    orientation: tuple[bool, ...]
    circles: tuple[frozenset, ...]
    marked: int | None = None


@dataclass(frozen=True)
class LiftedGenerator:
    """A chain in the cube complex at one homological degree, keyed by cube labels."""

    degree: int
    terms: dict
    field: Field

    def chain(self, C: GradedChainComplex) -> dict[int, Poly]:
        out = {}
        for lab, c in self.terms.items():
            h, i = C.index(lab)
            if h != self.degree:
                raise ValueError("lift lives in a different degree")
            out[i] = c
        return out


def all_orientations(D: LinkDiagram) -> list[tuple[bool, ...]]:
    k = D.num_components
    return [tuple(not ((m >> i) & 1) for i in range(k)) for m in range(1 << k)]


def canonical_generator(D: LinkDiagram, o: Sequence[bool] | None = None) -> LeeGenerator:
    o = D.orientation(o)
    lab = checkerboard_labels(D, o)
    res = lab.resolution
    return LeeGenerator(res.vertex, tuple("e1" if t == "a" else "e2" for t in lab.tags), o,
                        res.circles)


def reduced_canonical_generator(D: LinkDiagram, o: Sequence[bool] | None = None,
                                basepoint: int | None = None) -> LeeGenerator:
    p = basepoint if basepoint is not None else D.basepoint
    if p is None:
        raise ValueError("reduced generator needs a basepoint")
    o = D.orientation(o)
    lab = checkerboard_labels(D, o, basepoint=p)
    res = lab.resolution
    return LeeGenerator(res.vertex, tuple("e1" if t == "a" else "e2" for t in lab.tags), o,
                        res.circles, res.circle_of(p))


def _factor(tag: str, F: Field) -> tuple[Poly, Poly]:
    """Cleared idempotent numerators on {1, X}: e1 -> X - U, e2 -> V - X."""
    if tag == "e1":
        return (-Poly.U(F), Poly.one(F))
    return (Poly.V(F), -Poly.one(F))


def _expand(gen: LeeGenerator, F: Field, skip: int | None = None) -> dict[int, Poly]:
    out = {0: Poly.one(F)}
    for i, tag in enumerate(gen.labels):
        if i == skip:
            continue
        c0, c1 = _factor(tag, F)
        nxt = {}
        for m, c in out.items():
            for bit, f in ((0, c0), (1, c1)):
                v = c * f
                if v:
                    nxt[m | (bit << i)] = v
        out = nxt
    return out


def lift_tilde(D: LinkDiagram, o: Sequence[bool] | None = None, field_: Field = F2
               ) -> LiftedGenerator:
    """(V-U)^r times the Lee generator, written in the {1, X} basis of the cube."""
    gen = canonical_generator(D, o)
    h = sum(gen.vertex) - D.n_minus
    return LiftedGenerator(h, {(gen.vertex, m): c for m, c in _expand(gen, field_).items()},
                           field_)


def reduced_lift(D: LinkDiagram, o: Sequence[bool] | None = None,
                 basepoint: int | None = None, field_: Field = F2) -> LiftedGenerator:
    """Reduced analogue: the marked factor X - U is the reduced basis vector itself."""
    gen = reduced_canonical_generator(D, o, basepoint)
    h = sum(gen.vertex) - D.n_minus
    mk = gen.marked
    terms = {(gen.vertex, m | (1 << mk)): c for m, c in _expand(gen, field_, skip=mk).items()}
    return LiftedGenerator(h, terms, field_)


# ---------------------------------------------------------------------------
# localized linear algebra

def dehomogenize(p: Poly) -> Poly:
    """p(1, V).  Ranks of graded matrices over Frac(R) survive this substitution."""
    return Poly({(0, n): c for n, c in p.dehomogenize_u().items()}, p.field, _clean=True)


def _rows(C: GradedChainComplex, h: int, fast: bool) -> list[dict]:
    rows = C.rows(h)
    if fast:
        rows = [{j: dehomogenize(p) for j, p in r.items()} for r in rows]
    return rows


def is_nontorsion(C: GradedChainComplex, z: dict[int, Poly], h: int) -> bool:
    """A cycle is nontorsion iff it is not a boundary over Frac(R)."""
    if C.apply_d(h, z):
        raise ValueError("z is not a cycle")
    n = C.size(h)
    if not any(z.values()):
        return False
    if h - 1 not in C.gens:
        return True
    col = [z.get(i, Poly.zero(C.field)) for i in range(n)]
    return not in_column_span(C.rows(h - 1), col)


_TORSION_CACHE: dict = {}


def torsion_functionals(C: GradedChainComplex, h: int) -> list[dict[int, Poly]]:
    """Vectors l (over F[V], U set to 1) with l . z = 0 exactly on boundaries.

    Valid for gr_q-homogeneous z, which is all the gr_t search needs.
    """
    key = (id(C), h)
    hit = _TORSION_CACHE.get(key)
    if hit is not None and hit[0] is C:
        return hit[1]
    n = C.size(h)
    if h - 1 not in C.gens or not C.diff.get(h - 1):
        one = Poly.one(C.field)
        out = [{i: one} for i in range(n)]
    else:
        out = left_kernel(_rows(C, h - 1, True), C.field)
    _TORSION_CACHE[key] = (C, out)
    return out


def localized_rank(C: GradedChainComplex) -> dict[int, int]:
    """dim ker - rank of the differential over Frac(R), per homological degree."""
    ranks = {h: ffge_rank(_rows(C, h, True)) if C.diff.get(h) else 0 for h in C.gens}
    out = {}
    for h in C.gens:
        r = C.size(h) - ranks.get(h, 0) - ranks.get(h - 1, 0)
        if r:
            out[h] = r
    return out


def gamma_class(D: LinkDiagram, o: Sequence[bool] | None = None, field_: Field = F2
                ) -> LiftedGenerator:
    """(s~_o -+ s~_obar)/(V-U) for a positive diagram."""
    if D.n_minus:
        raise ValueError("gamma_class is only defined here for positive diagrams")
    o = D.orientation(o)
    gen = canonical_generator(D, o)
    a = gen.labels.count("e1")
    b = len(gen.labels) - a
    s_o = lift_tilde(D, o, field_)
    s_bar = lift_tilde(D, tuple(not x for x in o), field_)
    sgn = -1 if (a - b) % 2 == 0 else 1
    total = dict(s_o.terms)
    for k, c in s_bar.terms.items():
        v = total.get(k, Poly.zero(field_)) + (c if sgn == 1 else -c)
        if v:
            total[k] = v
        else:
            total.pop(k, None)
    if not total:
        raise ArithmeticError("gamma vanished")
    if min(vu_divisibility(c) for c in total.values()) != 1:
        raise ArithmeticError("gamma is not divisible by V - U exactly once")
    vu = Poly({(0, 1): 1, (1, 0): -1}, field_)
    return LiftedGenerator(s_o.degree, {k: divide_exact(c, vu) for k, c in total.items()}, field_)
