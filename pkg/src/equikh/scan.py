"""Scanning reduction: add crossings one at a time, deloop, eliminate.

The running complex lives in the category of crossingless tangles (see
:mod:`equikh.cobordism`).  Optionally a second, unreduced copy (the partial
cube) is carried along together with chain maps in both directions, which at
the end become the transport maps between :func:`build_cube` and the reduced
complex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import F2, Field, Poly
from .cobordism import (Matching, Morph, compose, cycles, deloop, horizontal, matching,
                        morph_add, morph_scale)
from .complex import ComplexError, Generator, GradedChainComplex, build_cube, reduced_subcomplex
from .diagram import LinkDiagram, smoothing_circles

__all__ = ["TangleComplex", "EquivalenceTrace", "scan_reduce", "DEFAULT_TRACE_CAP"]

DEFAULT_TRACE_CAP = 6


@dataclass
class TGen:
    degree: int           # number of 1-smoothings so far
    obj: Matching
    shift: int
    tag: tuple = ()       # partial-cube bookkeeping: (u bits, ((edge, label), ...))


class TangleComplex:
    def __init__(self, F: Field):
        self.F = F
        self.gens: dict[int, TGen] = {}
        self.out: dict[int, dict[int, Morph]] = {}
        self.inc: dict[int, set[int]] = {}
        self._next = 0

    def add(self, g: TGen) -> int:
        k = self._next
        self._next += 1
        self.gens[k] = g
        self.out[k] = {}
        self.inc[k] = set()
        return k

    def add_entry(self, a: int, b: int, m: Morph) -> None:
        if not m:
            return
        cur = self.out[a].get(b)
        if cur is None:
            self.out[a][b] = dict(m)
            self.inc[b].add(a)
        else:
            morph_add(cur, m)
            if not cur:
                del self.out[a][b]
                self.inc[b].discard(a)

    def set_entry(self, a: int, b: int, m: Morph) -> None:
        if m:
            self.out[a][b] = m
            self.inc[b].add(a)
        else:
            self.out[a].pop(b, None)
            self.inc[b].discard(a)

    def remove(self, k: int) -> None:
        for b in self.out.pop(k):
            self.inc[b].discard(k)
        for a in self.inc.pop(k):
            self.out[a].pop(k, None)
        del self.gens[k]


class _Map:
    """A chain map between two tangle complexes, stored by source generator."""

    def __init__(self):
        self.m: dict[int, dict[int, Morph]] = {}

    def add(self, a: int, b: int, mm: Morph):
        if not mm:
            return
        row = self.m.setdefault(a, {})
        cur = row.get(b)
        if cur is None:
            row[b] = dict(mm)
        else:
            morph_add(cur, mm)
            if not cur:
                del row[b]


@dataclass
class EquivalenceTrace:
    """Record of a scan: step statistics and, when tracked, the transport maps.

    ``to_reduced`` sends cube chains to reduced chains and ``from_reduced``
    goes back; both are degree-0, gr_q-preserving R-linear chain maps with
    ``to_reduced o from_reduced = id``.  Matrices are stored as
    ``{h: {source index: {target index: Poly}}}`` against :attr:`cube`.
    """

    order: list[int] = field(default_factory=list)
    sizes: list[int] = field(default_factory=list)
    eliminated: int = 0
    cube: GradedChainComplex | None = None
    to_reduced: dict | None = None
    from_reduced: dict | None = None

    @property
    def tracked(self) -> bool:
        return self.to_reduced is not None

    def push(self, z: dict, h: int) -> dict:
        """Transport a cube chain at degree h into the reduced complex."""
        return _apply_matrix(self.to_reduced, h, z)

    def pull(self, z: dict, h: int) -> dict:
        return _apply_matrix(self.from_reduced, h, z)

    def verify(self, reduced: GradedChainComplex) -> bool:
        """Both maps commute with d, preserve gr_q, and compose to the identity on the reduced side."""
        C = self.cube
        for src, tgt, M in ((C, reduced, self.to_reduced), (reduced, C, self.from_reduced)):
            for h, gs in src.gens.items():
                for j, g in enumerate(gs):
                    img = M.get(h, {}).get(j, {})
                    for i, p in img.items():
                        if any(tgt.gens[h][i].grq - 2 * (a + b) != g.grq for a, b in p.terms):
                            return False
                    lhs = tgt.apply_d(h, img)
                    rhs = _apply_matrix(M, h + 1, src.column(h, j))
                    if lhs != rhs:
                        return False
        F = reduced.field
        for h, gs in reduced.gens.items():
            for j in range(len(gs)):
                back = self.pull({j: Poly.one(F)}, h)
                if self.push(back, h) != {j: Poly.one(F)}:
                    return False
        return True


def _apply_matrix(M: dict, h: int, z: dict) -> dict:
    out: dict = {}
    cols = M.get(h, {})
    for j, c in z.items():
        for i, p in cols.get(j, {}).items():
            v = out.get(i)
            v = c * p if v is None else v + c * p
            if v:
                out[i] = v
            else:
                out.pop(i, None)
    return out


# ---------------------------------------------------------------------------
# tensoring with a crossing

def _smoothings(e: tuple[int, int, int, int]) -> tuple[Matching, Matching]:
    return (matching([(e[0], e[3]), (e[1], e[2])]), matching([(e[0], e[1]), (e[2], e[3])]))


class _Tensor:
    """Places one crossing (or a bare set of arcs) beside a tangle complex."""

    def __init__(self, F: Field, pieces: list[Matching], crossing: int | None,
                 loop_edges, loop_tags: bool):
        self.F = F
        self.pieces = pieces      # one smoothing per cube coordinate value
        self.crossing = crossing
        self.loop_edges = loop_edges
        self.loop_tags = loop_tags

    def objects(self, C: TangleComplex):
        """New generators for each (old generator, smoothing, loop summand)."""
        new = TangleComplex(self.F)
        where: dict[tuple[int, int], dict[int, int]] = {}
        for x, g in C.gens.items():
            for s, S in enumerate(self.pieces):
                P2, _, lp, _, _ = horizontal({}, g.obj, g.obj, {}, S, S, self.F)
                block = {}
                for sig in range(1 << len(lp)):
                    ones = bin(sig).count("1")
                    tag = g.tag
                    if tag:
                        u, labs = tag
                        if self.crossing is not None:
                            u = u + ((self.crossing, s),)
                        labs = labs + tuple((self.loop_edges(w[1]), (sig >> i) & 1)
                                            for i, w in enumerate(lp))
                        tag = (u, labs)
                    block[sig] = new.add(TGen(g.degree + s, P2, g.shift + s + len(lp) - 2 * ones, tag))
                where[(x, s)] = block
        return new, where

    def carry(self, src_obj: Matching, tgt_obj: Matching, m: Morph, s: int, coeff=None):
        S = self.pieces[s]
        _, _, lp, lq, mm = horizontal(m, src_obj, tgt_obj, {0: Poly.one(self.F)}, S, S, self.F,
                                      coeff)
        return deloop(mm, len(lp), len(lq), self.F)

    def saddle(self, obj: Matching, sign: int):
        S0, S1 = self.pieces
        coeff = None if sign == 1 else Poly.const(-1, self.F)
        _, _, lp, lq, mm = horizontal({0: Poly.one(self.F)}, obj, obj, {0: Poly.one(self.F)},
                                      S0, S1, self.F, coeff)
        return deloop(mm, len(lp), len(lq), self.F)


def _tensor_complex(C: TangleComplex, T: _Tensor, maps=()):
    new, where = T.objects(C)
    for x, g in C.gens.items():
        for s in range(len(T.pieces)):
            for y, m in C.out[x].items():
                for (a, b), mm in T.carry(g.obj, C.gens[y].obj, m, s).items():
                    new.add_entry(where[(x, s)][a], where[(y, s)][b], mm)
        if len(T.pieces) == 2:
            sign = -1 if (T.F.p != 2 and g.degree % 2) else 1
            for (a, b), mm in T.saddle(g.obj, sign).items():
                new.add_entry(where[(x, 0)][a], where[(x, 1)][b], mm)
    return new, where


def _tensor_map(M: _Map, A: TangleComplex, B: TangleComplex, wa, wb, T: _Tensor) -> _Map:
    out = _Map()
    for x, row in M.m.items():
        for y, m in row.items():
            for s in range(len(T.pieces)):
                for (a, b), mm in T.carry(A.gens[x].obj, B.gens[y].obj, m, s).items():
                    out.add(wa[(x, s)][a], wb[(y, s)][b], mm)
    return out


# ---------------------------------------------------------------------------
# Gaussian elimination

def _is_iso(C: TangleComplex, a: int, b: int, m: Morph):
    ga, gb = C.gens[a], C.gens[b]
    if ga.obj != gb.obj or ga.shift != gb.shift or len(m) != 1:
        return None
    c = m.get(0)
    if c is None or not c.is_unit():
        return None
    return c.constant()


def _eliminate(C: TangleComplex, fwd: _Map | None, back: _Map | None) -> int:
    F = C.F
    count = 0
    while True:
        cands = []
        for a, row in C.out.items():
            for b, m in row.items():
                if _is_iso(C, a, b, m) is not None:
                    cands.append(((len(C.inc[b]) - 1) * (len(row) - 1), a, b))
        if not cands:
            return count
        cands.sort()
        done: set[int] = set()
        for _, a, b in cands:
            if a in done or b in done:
                continue
            m = C.out[a].get(b)
            if m is None:
                continue
            c = _is_iso(C, a, b, m)
            if c is None:
                continue
            _pivot(C, a, b, F.inv(c), fwd, back)
            done.update((a, b))
            count += 1


def _pivot(C: TangleComplex, a: int, b: int, cinv, fwd: _Map | None, back: _Map | None):
    F = C.F
    neg = Poly.const(-cinv, F)
    ys = [y for y in C.inc[b] if y != a]
    zs = [z for z in C.out[a] if z != b]
    obj = C.gens[a].obj
    for y in ys:
        dyb = C.out[y][b]
        Py = C.gens[y].obj
        for z in zs:
            cur = C.out[y].get(z)
            acc = {} if cur is None else cur
            compose(dyb, Py, obj, C.out[a][z], C.gens[z].obj, F, coeff=neg, out=acc)
            C.set_entry(y, z, acc)
    if fwd is not None:
        # f(b) = -d(a->z) c^-1 on the reduced side
        for k, row in fwd.m.items():
            kb = row.get(b)
            if kb is not None:
                src = fwd.src.gens[k].obj
                for z in zs:
                    acc = row.get(z, {})
                    compose(kb, src, obj, C.out[a][z], C.gens[z].obj, F, coeff=neg, out=acc)
                    if acc:
                        row[z] = acc
                    else:
                        row.pop(z, None)
            row.pop(a, None)
            row.pop(b, None)
    if back is not None:
        # g(y) = y - a c^-1 d(y->b)
        arow = back.m.get(a, {})
        for y in ys:
            dyb = C.out[y][b]
            row = back.m.setdefault(y, {})
            for k, m in arow.items():
                acc = row.get(k, {})
                compose(dyb, C.gens[y].obj, obj, m, back.tgt.gens[k].obj, F, coeff=neg, out=acc)
                if acc:
                    row[k] = acc
                else:
                    row.pop(k, None)
        back.m.pop(a, None)
        back.m.pop(b, None)
    C.remove(a)
    C.remove(b)


# ---------------------------------------------------------------------------
# driver

def _plan(D: LinkDiagram, basepoint: int | None):
    """Per-crossing edge labels after cutting the basepoint and self-joined edges.

    Returns (steps, initial arcs, free loops, fresh->original map).  Each step
    is (crossing index, edges, link arcs to add first).
    """
    fresh = max(D.edges, default=0) + 1
    origin: dict[int, int] = {}
    seen: set[int] = set()
    steps = []
    init_arcs = []
    loops = [e for e in D.loops if e != basepoint]
    if basepoint is not None and basepoint in D.loops:
        init_arcs.append((basepoint, fresh))
        origin[fresh] = basepoint
        fresh += 1
    for i, c in enumerate(D.crossings):
        edges = list(c.edges)
        links = []
        local: set[int] = set()
        for s, e in enumerate(edges):
            if e == basepoint and e in seen | local:
                edges[s] = fresh
                origin[fresh] = e
                fresh += 1
            elif e in local:
                edges[s] = fresh
                origin[fresh] = e
                links.append((e, fresh))
                fresh += 1
            local.add(e)
        seen |= local
        steps.append((i, tuple(edges), links))
    return steps, init_arcs, loops, origin


def scan_reduce(D: LinkDiagram, field_: Field = F2, basepoint: int | None = None,
                trace: bool | None = None, trace_cap: int = DEFAULT_TRACE_CAP
                ) -> tuple[GradedChainComplex, EquivalenceTrace]:
    """Scan D crossing by crossing in input order.

    With ``basepoint`` the result is the reduced complex (marked circle cut
    open and carrying X - U).  ``trace`` (default: on for at most
    ``trace_cap`` crossings) also builds the transport maps to the cube.
    """
    F = field_
    if basepoint is not None and basepoint not in D.edges:
        raise ComplexError(f"basepoint {basepoint} is not an edge of the diagram")
    track = trace if trace is not None else D.n <= trace_cap
    steps, init_arcs, loops, origin = _plan(D, basepoint)
    orig = lambda x: origin.get(x, x)
    rec = EquivalenceTrace()

    def start(tags: bool) -> TangleComplex:
        C = TangleComplex(F)
        obj = matching(init_arcs)
        k = len(loops)
        for sig in range(1 << k):
            ones = bin(sig).count("1")
            tag = ((), tuple((e, (sig >> i) & 1) for i, e in enumerate(loops))) if tags else ()
            C.add(TGen(0, obj, k - 2 * ones, tag))
        return C

    S = start(False)
    K = start(True) if track else None
    fwd = back = None
    if track:
        fwd, back = _Map(), _Map()
        ks = sorted(K.gens)
        for x, y in zip(ks, sorted(S.gens)):
            fwd.add(x, y, {0: Poly.one(F)})
            back.add(y, x, {0: Poly.one(F)})
        fwd.src, fwd.tgt, back.src, back.tgt = K, S, S, K

    for i, edges, links in steps:
        rec.order.append(i)
        phases = []
        if links:
            phases.append(_Tensor(F, [matching(links)], None, orig, track))
        phases.append(_Tensor(F, list(_smoothings(edges)), i, orig, track))
        for T in phases:
            S2, ws = _tensor_complex(S, T)
            if track:
                K2, wk = _tensor_complex(K, T)
                fwd = _tensor_map(fwd, K, S, wk, ws, T)
                back = _tensor_map(back, S, K, ws, wk, T)
                K = K2
                fwd.src, fwd.tgt, back.src, back.tgt = K, S2, S2, K
            S = S2
        rec.eliminated += _eliminate(S, fwd, back)
        rec.sizes.append(len(S.gens))

    out = _close(S, D, F, basepoint)
    if track:
        cube = build_cube(D, F, max_crossings=max(D.n, 1))
        if basepoint is not None:
            cube = reduced_subcomplex(cube, D, basepoint)
        rec.cube = cube
        kidx = _cube_positions(K, D, cube, basepoint)
        sidx = _positions(S, D)
        rec.to_reduced = _closed_matrix(fwd, K, S, kidx, sidx, F, basepoint is not None)
        rec.from_reduced = _closed_matrix(back, S, K, sidx, kidx, F, basepoint is not None)
    return out, rec


def _closed_value(m: Morph, F: Field, reduced: bool) -> Poly:
    if not reduced:
        return m.get(0, Poly.zero(F))
    # arc endomorphism c0 + c1 X acts on the X - U line as c0 + c1 V
    c = m.get(0, Poly.zero(F))
    c1 = m.get(1)
    if c1 is not None:
        c = c + c1 * Poly.V(F)
    return c


def _order(C: TangleComplex, D: LinkDiagram) -> dict[int, list[int]]:
    by: dict[int, list[int]] = {}
    for k in sorted(C.gens, key=lambda k: (C.gens[k].degree, -C.gens[k].shift, k)):
        by.setdefault(C.gens[k].degree - D.n_minus, []).append(k)
    return by


def _positions(C: TangleComplex, D: LinkDiagram) -> dict[int, tuple[int, int]]:
    return {k: (h, i) for h, ks in _order(C, D).items() for i, k in enumerate(ks)}


def _close(C: TangleComplex, D: LinkDiagram, F: Field, basepoint) -> GradedChainComplex:
    shift = D.n_plus - 2 * D.n_minus
    pos = _positions(C, D)
    gens: dict[int, list[Generator]] = {}
    for h, ks in _order(C, D).items():
        gens[h] = [Generator(h, C.gens[k].shift + shift, ("s", i)) for i, k in enumerate(ks)]
    diff: dict = {}
    red = basepoint is not None
    for a, row in C.out.items():
        h, j = pos[a]
        for b, m in row.items():
            v = _closed_value(m, F, red)
            if v:
                diff.setdefault(h, {}).setdefault(j, {})[pos[b][1]] = v
    out = GradedChainComplex(F, gens, diff)
    return out


def _cube_positions(K: TangleComplex, D: LinkDiagram, cube: GradedChainComplex, basepoint):
    pos = {}
    for k, g in K.gens.items():
        u_pairs, labs = g.tag
        ub = [0] * D.n
        for i, s in u_pairs:
            ub[i] = s
        ub = tuple(ub)
        circles = smoothing_circles(D, ub)
        mask = 0
        for e, lab in labs:
            idx = next(i for i, c in enumerate(circles) if e in c)
            if lab:
                mask |= 1 << idx
        if basepoint is not None:
            idx = next(i for i, c in enumerate(circles) if basepoint in c)
            mask |= 1 << idx
        pos[k] = cube.index((ub, mask))
    return pos


def _closed_matrix(M: _Map, A: TangleComplex, B: TangleComplex, pa, pb, F: Field, reduced: bool):
    out: dict = {}
    for x, row in M.m.items():
        h, j = pa[x]
        for y, m in row.items():
            v = _closed_value(m, F, reduced)
            if v:
                hb, i = pb[y]
                if hb != h:
                    raise ComplexError("transport map changes homological degree")
                out.setdefault(h, {}).setdefault(j, {})[i] = v
    return out
