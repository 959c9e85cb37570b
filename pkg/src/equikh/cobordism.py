"""Cobordisms between crossingless tangles, in the disc basis.

A crossingless tangle without closed loops is a perfect matching on its
boundary points.  A morphism P -> Q is an R-combination of surfaces that are
unions of discs, one disc per cycle of P and Q glued along the boundary
points; each disc carries label 1 or X (no dot or one dot).  Morphisms are
stored as ``{mask: Poly}`` with bit i of ``mask`` set when the i-th cycle
(ordered by smallest point) carries X.

Composition of any two surfaces is evaluated by cutting the glued surface
into connected components and applying the Frobenius algebra to each: a
connected piece with ``b`` boundary cycles, ``g`` handles and ``d`` dots is
Delta^(b-1)(X^d h^g).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .algebra import Field, Poly
from .frobenius import surface_value

Matching = tuple[tuple[int, int], ...]
Morph = dict  # mask -> Poly

__all__ = ["Matching", "Morph", "matching", "cycles", "glue", "identity", "saddle",
           "compose", "horizontal", "deloop", "morph_add", "morph_scale", "morph_degree"]


def matching(pairs) -> Matching:
    return tuple(sorted(tuple(sorted(p)) for p in pairs))


def _partner(P: Matching) -> dict[int, tuple[int, int]]:
    """point -> (partner point, arc index)."""
    out = {}
    for i, (a, b) in enumerate(P):
        out[a] = (b, i)
        out[b] = (a, i)
    return out


@lru_cache(maxsize=None)
def cycles(P: Matching, Q: Matching) -> tuple[tuple[tuple[int, ...], tuple[int, ...], int], ...]:
    """Cycles of P and Q as (P-arc indices, Q-arc indices, smallest point)."""
    pp, qp = _partner(P), _partner(Q)
    if pp.keys() != qp.keys():
        raise ValueError("matchings live on different point sets")
    seen: set[int] = set()
    out = []
    for x0 in sorted(pp):
        if x0 in seen:
            continue
        pa, qa = [], []
        x = x0
        while True:
            seen.add(x)
            y, i = pp[x]
            pa.append(i)
            seen.add(y)
            x, j = qp[y]
            qa.append(j)
            if x == x0:
                break
        out.append((tuple(pa), tuple(qa), x0))
    return tuple(out)


def identity(P: Matching, F: Field) -> Morph:
    return {0: Poly.one(F)}


def saddle(F: Field) -> Morph:
    """The saddle between the two smoothings of a crossing (a single disc)."""
    return {0: Poly.one(F)}


@lru_cache(maxsize=None)
def glue(P: Matching, S: Matching):
    """Join P and S along their shared points.

    Returns ``(arcs, loops, ends)`` where ``arcs`` is the resulting matching,
    ``loops`` lists closed loops as ("P"|"S", arc index) witnesses plus one
    shared point, and ``ends[x]`` names the original arc ending at boundary
    point ``x``.
    """
    pp, sp = _partner(P), _partner(S)
    shared = pp.keys() & sp.keys()
    used_p: set[int] = set()
    used_s: set[int] = set()
    arcs = []
    ends: dict[int, tuple[str, int]] = {}
    for x0 in sorted((pp.keys() | sp.keys()) - shared):
        if x0 in ends:
            continue
        side = "P" if x0 in pp else "S"
        ends[x0] = (side, (pp if side == "P" else sp)[x0][1])
        x = x0
        while True:
            y, i = (pp if side == "P" else sp)[x]
            (used_p if side == "P" else used_s).add(i)
            if y not in shared:
                break
            side = "S" if side == "P" else "P"
            x = y
        ends[y] = (side, i)
        arcs.append((x0, y))
    loops = []
    for i, (a, _) in enumerate(P):
        if i in used_p:
            continue
        low = a
        x = a
        while True:
            y, j = pp[x]
            used_p.add(j)
            z, k = sp[y]
            used_s.add(k)
            low = min(low, x, y)
            x = z
            if x == a:
                break
        loops.append((("P", i), low))
    loops.sort(key=lambda w: w[1])
    return matching(arcs), tuple(loops), ends


# ---------------------------------------------------------------------------
# surface evaluation

class _Structure:
    """Connected components of a glued disc surface and their boundary cycles."""

    __slots__ = ("piece_comp", "comp_outputs", "comp_genus", "n_out")

    def __init__(self, n_pieces: int, gluings: Sequence[tuple[int, int]],
                 output_piece: Sequence[int]):
        parent = list(range(n_pieces))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in gluings:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        roots = sorted({find(i) for i in range(n_pieces)})
        idx = {r: k for k, r in enumerate(roots)}
        self.piece_comp = tuple(idx[find(i)] for i in range(n_pieces))
        pieces = [0] * len(roots)
        for c in self.piece_comp:
            pieces[c] += 1
        glues = [0] * len(roots)
        for a, _ in gluings:
            glues[self.piece_comp[a]] += 1
        outs: list[list[int]] = [[] for _ in roots]
        for o, p in enumerate(output_piece):
            outs[self.piece_comp[p]].append(o)
        genus = []
        for c in range(len(roots)):
            chi = pieces[c] - glues[c]
            twice = 2 - len(outs[c]) - chi
            if twice < 0 or twice % 2:
                raise ArithmeticError("glued surface has inconsistent topology")
            genus.append(twice // 2)
        self.comp_outputs = tuple(tuple(o) for o in outs)
        self.comp_genus = tuple(genus)
        self.n_out = len(output_piece)

    def dots(self, masks_and_offsets) -> tuple[int, ...]:
        d = [0] * len(self.comp_genus)
        pc = self.piece_comp
        for mask, off in masks_and_offsets:
            i = 0
            while mask:
                if mask & 1:
                    d[pc[off + i]] += 1
                mask >>= 1
                i += 1
        return tuple(d)


@lru_cache(maxsize=200_000)
def _evaluate(outputs: tuple, genus: tuple, dots: tuple, F: Field) -> tuple:
    acc = {0: Poly.one(F)}
    for outs, g, d in zip(outputs, genus, dots):
        val = surface_value(d, g, len(outs), F)
        if not val:
            return ()
        nxt = {}
        for m0, c0 in acc.items():
            for m, c in val:
                key = m0
                i = 0
                while m:
                    if m & 1:
                        key |= 1 << outs[i]
                    m >>= 1
                    i += 1
                v = c0 * c
                nxt[key] = nxt[key] + v if key in nxt else v
        acc = {k: v for k, v in nxt.items() if v}
    return tuple(acc.items())


def _apply(st: _Structure, f: Morph, g: Morph, off: int, F: Field, out: Morph | None = None,
           coeff=None) -> Morph:
    out = {} if out is None else out
    for mf, cf in f.items():
        for mg, cg in g.items():
            c = cf * cg
            if coeff is not None:
                c = c * coeff
            if not c:
                continue
            for key, v in _evaluate(st.comp_outputs, st.comp_genus,
                                    st.dots(((mf, 0), (mg, off))), F):
                w = c * v
                if key in out:
                    w = out[key] + w
                    if w:
                        out[key] = w
                    else:
                        del out[key]
                elif w:
                    out[key] = w
    return out


@lru_cache(maxsize=None)
def _vertical(P: Matching, Q: Matching, S: Matching) -> tuple[_Structure, int]:
    c1 = cycles(P, Q)
    c2 = cycles(Q, S)
    q_in_1 = {j: k for k, (_, qa, _) in enumerate(c1) for j in qa}
    q_in_2 = {j: k for k, (qa, _, _) in enumerate(c2) for j in qa}
    p_in_1 = {i: k for k, (pa, _, _) in enumerate(c1) for i in pa}
    off = len(c1)
    gl = [(q_in_1[j], off + q_in_2[j]) for j in range(len(Q))]
    outputs = [p_in_1[pa[0]] for pa, _, _ in cycles(P, S)]
    return _Structure(off + len(c2), gl, outputs), off


def compose(f: Morph, P: Matching, Q: Matching, g: Morph, S: Matching, F: Field,
            coeff=None, out: Morph | None = None) -> Morph:
    """g o f for f: P -> Q and g: Q -> S (optionally scaled and accumulated)."""
    st, off = _vertical(P, Q, S)
    return _apply(st, f, g, off, F, out, coeff)


@lru_cache(maxsize=None)
def _horizontal(P: Matching, Q: Matching, S: Matching, T: Matching):
    c1 = cycles(P, Q)
    c2 = cycles(S, T)
    off = len(c1)
    P2, lp, ends_p = glue(P, S)
    Q2, lq, ends_q = glue(Q, T)
    pt1 = {}
    for k, (pa, qa, _) in enumerate(c1):
        for i in pa:
            for x in P[i]:
                pt1[x] = k
    pt2 = {}
    for k, (sa, ta, _) in enumerate(c2):
        for i in sa:
            for x in S[i]:
                pt2[x] = k
    shared = pt1.keys() & pt2.keys()
    gl = [(pt1[x], off + pt2[x]) for x in sorted(shared)]

    def piece_bottom(w):
        side, i = w
        return pt1[P[i][0]] if side == "P" else off + pt2[S[i][0]]

    pa1 = {i: k for k, (pa, _, _) in enumerate(c1) for i in pa}
    qa1 = {j: k for k, (_, qa, _) in enumerate(c1) for j in qa}
    sa2 = {i: k for k, (sa, _, _) in enumerate(c2) for i in sa}
    ta2 = {j: k for k, (_, ta, _) in enumerate(c2) for j in ta}

    def piece_top(w):
        side, i = w
        return qa1[i] if side == "P" else off + ta2[i]

    outputs = [piece_bottom(w) for w, _ in lp]
    outputs += [piece_top(w) for w, _ in lq]
    for pa, _, _ in cycles(P2, Q2):
        a, _ = P2[pa[0]]
        side, i = ends_p[a]
        outputs.append(pa1[i] if side == "P" else off + sa2[i])
    return _Structure(off + len(c2), gl, outputs), off, P2, Q2, lp, lq


def horizontal(f: Morph, P: Matching, Q: Matching, g: Morph, S: Matching, T: Matching,
               F: Field, coeff=None):
    """Place f: P -> Q beside g: S -> T, glued along their common points.

    Returns ``(P2, Q2, source_loops, target_loops, morph)``; the morph is in
    the disc basis whose cycles are the source loops, then the target loops,
    then the cycles of the loop-free parts.
    """
    st, off, P2, Q2, lp, lq = _horizontal(P, Q, S, T)
    return P2, Q2, lp, lq, _apply(st, f, g, off, F, None, coeff)


def deloop(m: Morph, ns: int, nt: int, F: Field) -> dict[tuple[int, int], Morph]:
    """Split a morph with ``ns`` source and ``nt`` target loops into summand blocks.

    Summand bit 0 is the {+1} copy (label 1), bit 1 the {-1} copy (label X).
    Returns {(source summand, target summand): morph on the loop-free parts}.
    """
    if not ns and not nt:
        return {(0, 0): m} if m else {}
    u_plus_v = Poly({(1, 0): 1, (0, 1): 1}, F)
    smask = (1 << ns) - 1
    tmask = (1 << nt) - 1
    out: dict[tuple[int, int], Morph] = {}
    for mask, c in m.items():
        sb = mask & smask
        tb = (mask >> ns) & tmask
        rest = mask >> (ns + nt)
        xs = [i for i in range(ns) if (sb >> i) & 1]
        forced = smask & ~sb  # loops capped with label 1 only reach the {-1} copy
        for k in range(1 << len(xs)):
            sig = forced
            coef = c
            for j, i in enumerate(xs):
                if (k >> j) & 1:
                    sig |= 1 << i
                    coef = coef * u_plus_v
            if not coef:
                continue
            blk = out.setdefault((sig, tb), {})
            v = blk.get(rest)
            v = coef if v is None else v + coef
            if v:
                blk[rest] = v
            else:
                blk.pop(rest, None)
    return {k: v for k, v in out.items() if v}


def morph_add(acc: Morph, m: Morph, coeff=None) -> Morph:
    for k, c in m.items():
        if coeff is not None:
            c = c * coeff
        v = acc.get(k)
        v = c if v is None else v + c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc


def morph_scale(m: Morph, c) -> Morph:
    out = {}
    for k, v in m.items():
        w = v * c
        if w:
            out[k] = w
    return out


def morph_degree(P: Matching, Q: Matching, mask: int, poly_degree: int) -> int:
    """Degree of a disc-basis element: chi minus half the boundary points, dots and U, V count -2."""
    return len(cycles(P, Q)) - len(P) - 2 * bin(mask).count("1") - 2 * poly_degree
