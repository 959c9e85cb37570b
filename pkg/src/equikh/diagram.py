"""Planar link diagrams: PD codes, orientations, smoothings, faces, colorings.

Slot convention.  ``X[a,b,c,d]`` lists the four edges around a crossing in
cyclic order starting with the incoming under-strand ``a``; the under-strand
leaves along ``c``.  The crossing is positive when the over-strand runs from
the second slot to the fourth (``b`` in, ``d`` out) and negative when it
runs from ``d`` to ``b``.  Read geometrically the slots go clockwise, which
makes ``PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]`` the right-handed trefoil.

Smoothing convention.  The 0-smoothing joins slots (a, d) and (b, c); the
1-smoothing joins (a, b) and (c, d).  A positive crossing's 0-smoothing and a
negative crossing's 1-smoothing are the oriented ones.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

__all__ = [
    "Crossing", "LinkDiagram", "Resolution", "CircleLabeling", "DiagramError",
    "parse_pd", "parse_diagram_json", "load_diagram", "unknot", "unlink",
    "mirror", "resolve", "oriented_resolution", "checkerboard_labels",
    "seifert_circle_count", "braid_closure", "disjoint_union",
]

SMOOTHING = {0: ((0, 3), (1, 2)), 1: ((0, 1), (2, 3))}


class DiagramError(ValueError):
    """Malformed or inconsistent diagram input."""


@dataclass(frozen=True)
class Crossing:
    edges: tuple[int, int, int, int]
    sign: int

    @property
    def over_in(self) -> int:
        return 1 if self.sign > 0 else 3

    @property
    def over_out(self) -> int:
        return 3 if self.sign > 0 else 1

    def entering(self) -> tuple[int, int]:
        return (0, self.over_in)

    def to_pd(self) -> str:
        return "X[" + ",".join(map(str, self.edges)) + "]"


@dataclass(frozen=True)
class LinkDiagram:
    """An oriented link diagram.

    ``loops`` are crossingless circles (given fresh edge labels), each drawn
    counterclockwise unless flagged in ``clockwise``.
    """

    crossings: tuple[Crossing, ...]
    loops: tuple[int, ...] = ()
    clockwise: frozenset = frozenset()
    basepoint: int | None = None

    def __post_init__(self):
        self._validate()

    # basic counts -------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def n_plus(self) -> int:
        return sum(1 for c in self.crossings if c.sign > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for c in self.crossings if c.sign < 0)

    @property
    def writhe(self) -> int:
        return self.n_plus - self.n_minus

    @cached_property
    def edges(self) -> tuple[int, ...]:
        return tuple(sorted({e for c in self.crossings for e in c.edges} | set(self.loops)))

    @cached_property
    def ends(self) -> dict[int, tuple[tuple[int, int], tuple[int, int]]]:
        """edge -> (tail, head) as (crossing, slot) pairs."""
        tails: dict[int, tuple[int, int]] = {}
        heads: dict[int, tuple[int, int]] = {}
        for i, c in enumerate(self.crossings):
            ins = c.entering()
            for s, e in enumerate(c.edges):
                d = heads if s in ins else tails
                if e in d:
                    raise DiagramError(f"edge {e} is {'entering' if d is heads else 'leaving'} twice")
                d[e] = (i, s)
        out = {}
        for e in set(tails) | set(heads):
            if e not in tails or e not in heads:
                raise DiagramError(f"edge {e} has inconsistent orientation")
            out[e] = (tails[e], heads[e])
        return out

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Edges of each link component in traversal order, sorted by smallest edge."""
        nxt: dict[int, int] = {}
        for e, (_, (c, s)) in self.ends.items():
            nxt[e] = self.crossings[c].edges[(s + 2) % 4]
        seen: set[int] = set()
        comps = []
        for e in sorted(nxt):
            if e in seen:
                continue
            cyc = []
            x = e
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = nxt[x]
            comps.append(tuple(cyc))
        comps.extend((e,) for e in self.loops)
        return tuple(sorted(comps, key=min))

    @property
    def num_components(self) -> int:
        return len(self.components)

    @cached_property
    def component_of(self) -> dict[int, int]:
        return {e: i for i, comp in enumerate(self.components) for e in comp}

    def _validate(self):
        count: dict[int, int] = {}
        for c in self.crossings:
            if len(c.edges) != 4:
                raise DiagramError("each crossing needs exactly four edges")
            if c.sign not in (1, -1):
                raise DiagramError(f"crossing sign must be +1 or -1, got {c.sign}")
            for e in c.edges:
                count[e] = count.get(e, 0) + 1
        bad = sorted(e for e, k in count.items() if k != 2)
        if bad:
            raise DiagramError(f"edges {bad} do not appear exactly twice")
        if set(self.loops) & set(count):
            raise DiagramError("loop labels clash with crossing edges")
        _ = self.ends
        self.faces  # runs the planarity check
        if self.basepoint is not None and self.basepoint not in self.edges:
            raise DiagramError(f"basepoint {self.basepoint} is not an edge of the diagram")

    # planar structure ---------------------------------------------------
    def other_end(self, c: int, s: int) -> tuple[int, int]:
        e = self.crossings[c].edges[s]
        a, b = self.ends[e]
        return b if a == (c, s) else a

    @cached_property
    def faces(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Faces as cycles of states (crossing, arrival slot), turning left."""
        states = [(c, s) for c in range(self.n) for s in range(4)]
        seen: set = set()
        faces = []
        for st in states:
            if st in seen:
                continue
            cyc = []
            x = st
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                c, s = x
                x = self.other_end(c, (s + 1) % 4)
            if x != st:
                raise DiagramError("face tracing failed; PD code is not planar")
            faces.append(tuple(cyc))
        # Euler check per connected piece of the 4-valent graph
        for piece in self._pieces():
            cs = set(piece)
            nf = sum(1 for f in faces if f[0][0] in cs)
            ne = len({e for c in piece for e in self.crossings[c].edges})
            if len(piece) - ne + nf != 2:
                raise DiagramError(
                    f"non-planar PD code: V - E + F = {len(piece) - ne + nf}, expected 2")
        return tuple(faces)

    def _pieces(self) -> list[list[int]]:
        adj: dict[int, set[int]] = {c: set() for c in range(self.n)}
        for e, ((c1, _), (c2, _)) in self.ends.items():
            adj[c1].add(c2)
            adj[c2].add(c1)
        seen: set[int] = set()
        out = []
        for c in range(self.n):
            if c in seen:
                continue
            comp, q = [], deque([c])
            seen.add(c)
            while q:
                x = q.popleft()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        q.append(y)
            out.append(sorted(comp))
        return out

    @cached_property
    def face_of(self) -> dict[tuple[int, int], int]:
        return {st: i for i, f in enumerate(self.faces) for st in f}

    @cached_property
    def shading(self) -> tuple[int, ...]:
        """Checkerboard colour per face (1 = shaded); each piece's outer face is 0."""
        nf = len(self.faces)
        nbrs: list[list[int]] = [[] for _ in range(nf)]
        for e, (tail, head) in self.ends.items():
            a, b = self.face_of[head], self.face_of[tail]
            nbrs[a].append(b)
            nbrs[b].append(a)
        colour = [-1] * nf
        for piece in self._pieces():
            cs = set(piece)
            cand = [i for i, f in enumerate(self.faces) if f[0][0] in cs]
            outer = max(cand, key=lambda i: (len(self.faces[i]), -min(self.faces[i])[0] * 4 - min(self.faces[i])[1]))
            colour[outer] = 0
            q = deque([outer])
            while q:
                x = q.popleft()
                for y in nbrs[x]:
                    if colour[y] < 0:
                        colour[y] = 1 - colour[x]
                        q.append(y)
                    elif colour[y] == colour[x]:
                        raise DiagramError("diagram admits no checkerboard colouring")
        return tuple(colour)

    # orientation helpers --------------------------------------------------
    def orientation(self, o: Sequence[bool] | None = None) -> tuple[bool, ...]:
        """Normalize an orientation: one flag per component, True = as given."""
        if o is None:
            return (True,) * self.num_components
        o = tuple(bool(x) for x in o)
        if len(o) != self.num_components:
            raise DiagramError(
                f"orientation has {len(o)} entries, diagram has {self.num_components} components")
        return o

    def crossing_flip(self, i: int, o: Sequence[bool]) -> bool:
        """Whether exactly one strand at crossing i is reversed by ``o``."""
        c = self.crossings[i]
        under = self.component_of[c.edges[0]]
        over = self.component_of[c.edges[1]]
        return o[under] != o[over]

    def signs(self, o: Sequence[bool] | None = None) -> tuple[int, ...]:
        o = self.orientation(o)
        return tuple(-c.sign if self.crossing_flip(i, o) else c.sign
                     for i, c in enumerate(self.crossings))

    def oriented_vertex(self, o: Sequence[bool] | None = None) -> tuple[int, ...]:
        return tuple(0 if s > 0 else 1 for s in self.signs(o))

    # output ---------------------------------------------------------------
    def to_pd(self) -> str:
        return "PD[" + ",".join(c.to_pd() for c in self.crossings) + "]"

    def to_json(self) -> dict:
        d = {
            "crossings": [{"edges": list(c.edges), "sign": c.sign} for c in self.crossings],
            "unknots": len(self.loops),
        }
        if self.basepoint is not None:
            d["basepoint"] = self.basepoint
        return d

    def with_basepoint(self, p: int | None) -> "LinkDiagram":
        return LinkDiagram(self.crossings, self.loops, self.clockwise, p)

    def default_basepoint(self) -> int:
        return self.edges[0]


@dataclass(frozen=True)
class Resolution:
    vertex: tuple[int, ...]
    circles: tuple[frozenset, ...]

    @property
    def weight(self) -> int:
        return sum(self.vertex)

    def circle_of(self, edge: int) -> int:
        for i, c in enumerate(self.circles):
            if edge in c:
                return i
        raise KeyError(edge)


@dataclass(frozen=True)
class CircleLabeling:
    """Per-circle tag 'a' or 'b' on the circles of one resolution."""

    resolution: Resolution
    tags: tuple[str, ...]

    def tag(self, i: int) -> str:
        return self.tags[i]

    def swapped(self) -> "CircleLabeling":
        return CircleLabeling(self.resolution, tuple("b" if t == "a" else "a" for t in self.tags))


# ---------------------------------------------------------------------------
# parsing

_PD_RE = re.compile(r"^\s*PD\s*\[(.*)\]\s*$", re.S)
_X_RE = re.compile(r"X\s*\[([^\]]*)\]")


def parse_pd(text: str, basepoint: int | None = None) -> LinkDiagram:
    """Parse ``PD[X[a,b,c,d], ...]``; orientation and signs are derived.

    Codes whose labels all appear once are read as listing strand ends along
    a single component (ends 2k and 2k+1 joined by an arc).
    """
    m = _PD_RE.match(text)
    if not m:
        raise DiagramError(f"malformed PD code: {text!r}")
    body = m.group(1).strip()
    raw: list[tuple[int, ...]] = []
    rest = _X_RE.sub("", body).replace(",", "").strip()
    if rest:
        raise DiagramError(f"malformed PD code: unexpected {rest!r}")
    for xm in _X_RE.finditer(body):
        parts = [p.strip() for p in xm.group(1).split(",")]
        if len(parts) != 4 or not all(re.fullmatch(r"\d+", p) for p in parts):
            raise DiagramError(f"malformed crossing X[{xm.group(1)}]")
        vals = tuple(int(p) for p in parts)
        if min(vals) < 1:
            raise DiagramError("edge labels must be positive integers")
        raw.append(vals)
    if not raw:
        raise DiagramError("PD code has no crossings; use an explicit unknot instead")
    counts: dict[int, int] = {}
    for x in raw:
        for e in x:
            counts[e] = counts.get(e, 0) + 1
    if all(k == 1 for k in counts.values()):
        raw = _ends_to_edges(raw)
    return _orient(raw, basepoint)


def _ends_to_edges(raw: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    total = 4 * len(raw)
    labels = sorted(e for x in raw for e in x)
    if labels != list(range(1, total + 1)):
        raise DiagramError("edges do not appear exactly twice")
    for x in raw:
        for a, b in ((x[0], x[2]), (x[1], x[3])):
            lo, hi = min(a, b), max(a, b)
            if hi != lo + 1 or lo % 2 == 0:
                raise DiagramError("edges do not appear exactly twice")
    # arc k joins end 2k to end 2k+1 (cyclically)
    arc = {}
    for k in range(1, total // 2 + 1):
        a, b = 2 * k, (2 * k) % total + 1
        arc[a] = arc[b] = k
    return [tuple(arc[e] for e in x) for x in raw]


def _orient(raw: list[tuple[int, ...]], basepoint: int | None) -> LinkDiagram:
    counts: dict[int, int] = {}
    where: dict[int, list[tuple[int, int]]] = {}
    for i, x in enumerate(raw):
        for s, e in enumerate(x):
            counts[e] = counts.get(e, 0) + 1
            where.setdefault(e, []).append((i, s))
    bad = sorted(e for e, k in counts.items() if k != 2)
    if bad:
        raise DiagramError(f"edges {bad} do not appear exactly twice")

    def other(c, s):
        a, b = where[raw[c][s]]
        return b if a == (c, s) else a

    # walk strands; a pass enters crossing c at slot s and leaves at s+2
    over_in: dict[int, int] = {}
    visited: set[tuple[int, int]] = set()
    for c0 in range(len(raw)):
        for s0 in range(4):
            if (c0, s0) in visited:
                continue
            passes = []
            c, s = c0, s0
            while (c, s) not in visited:
                visited.add((c, s))
                visited.add((c, (s + 2) % 4))
                passes.append((c, s))
                c, s = other(c, (s + 2) % 4)
            forward = backward = False
            for c, s in passes:
                if s == 0:
                    forward = True
                elif s == 2:
                    backward = True
            if forward and backward:
                raise DiagramError("inconsistent orientation: under-strand direction conflicts")
            if not forward and not backward:
                backward = _guess_reversed(raw, passes)
            for c, s in passes:
                if s in (1, 3):
                    over_in[c] = (s + 2) % 4 if backward else s
    crossings = tuple(Crossing(tuple(x), 1 if over_in[i] == 1 else -1)
                      for i, x in enumerate(raw))
    return LinkDiagram(crossings, basepoint=basepoint)


def _guess_reversed(raw, passes) -> bool:
    """Direction for a component that only passes over: follow increasing labels."""
    c, s = passes[0]
    e_in, e_out = raw[c][s], raw[c][(s + 2) % 4]
    labels = {raw[c][t] for c, s in passes for t in (s, (s + 2) % 4)}
    lo, hi = min(labels), max(labels)
    if e_out == e_in + 1 or (e_in == hi and e_out == lo):
        return False
    if e_in == e_out + 1 or (e_out == hi and e_in == lo):
        return True
    return False


def parse_diagram_json(data: dict | str) -> LinkDiagram:
    """``{"crossings":[{"edges":[a,b,c,d],"sign":+-1}],"basepoint":e,"unknots":k}``."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise DiagramError(f"malformed diagram JSON: {exc}") from None
    if not isinstance(data, dict):
        raise DiagramError("diagram JSON must be an object")
    try:
        crossings = tuple(
            Crossing(tuple(int(e) for e in c["edges"]), int(c.get("sign", 0)))
            for c in data.get("crossings", []))
        k = int(data.get("unknots", 0))
    except (KeyError, TypeError, ValueError) as exc:
        raise DiagramError(f"malformed diagram JSON: {exc}") from None
    if k < 0:
        raise DiagramError("unknots must be nonnegative")
    top = max((e for c in crossings for e in c.edges), default=0)
    loops = tuple(range(top + 1, top + 1 + k))
    bp = data.get("basepoint")
    return LinkDiagram(crossings, loops, basepoint=None if bp is None else int(bp))


def load_diagram(text: str) -> LinkDiagram:
    """PD text or the JSON form, whichever ``text`` holds."""
    t = text.strip()
    if t.startswith("{"):
        return parse_diagram_json(t)
    return parse_pd(t)


def unknot(clockwise: bool = False) -> LinkDiagram:
    """The crossingless unknot (a single loop with edge label 1)."""
    return LinkDiagram((), (1,), frozenset({1}) if clockwise else frozenset())


def unlink(k: int) -> LinkDiagram:
    return LinkDiagram((), tuple(range(1, k + 1)))


def disjoint_union(a: LinkDiagram, b: LinkDiagram) -> LinkDiagram:
    """Place b beside a, relabelling b's edges above a's."""
    off = max(a.edges, default=0)
    cr = a.crossings + tuple(Crossing(tuple(e + off for e in c.edges), c.sign) for c in b.crossings)
    loops = a.loops + tuple(e + off for e in b.loops)
    cw = a.clockwise | frozenset(e + off for e in b.clockwise)
    return LinkDiagram(cr, loops, cw, a.basepoint)


def braid_closure(word: Iterable[int], strands: int | None = None) -> LinkDiagram:
    """Closure of a braid word (i for sigma_i, -i for its inverse), strands going up."""
    word = list(word)
    if any(w == 0 for w in word):
        raise DiagramError("braid generators are nonzero integers")
    k = strands if strands is not None else max((abs(w) for w in word), default=0) + 1
    if any(abs(w) >= k for w in word):
        raise DiagramError("braid generator exceeds strand count")
    nxt = k + 1
    pos = list(range(1, k + 1))
    raw = []
    for w in word:
        i = abs(w) - 1
        bl, br = pos[i], pos[i + 1]
        tl, tr = nxt, nxt + 1
        nxt += 2
        if w > 0:
            raw.append([br, bl, tl, tr])  # SE, SW, NW, NE
        else:
            raw.append([bl, tl, tr, br])  # SW, NW, NE, SE
        pos[i], pos[i + 1] = tl, tr
    rename = {pos[j]: j + 1 for j in range(k)}
    raw = [[rename.get(e, e) for e in x] for x in raw]
    used = {e for x in raw for e in x}
    free = [j + 1 for j in range(k) if j + 1 not in used]
    # relabel by first appearance
    order: dict[int, int] = {}
    for x in raw:
        for e in x:
            order.setdefault(e, len(order) + 1)
    raw = [tuple(order[e] for e in x) for x in raw]
    if not raw:
        return unlink(len(free))
    d = _orient(raw, None)
    top = max(d.edges)
    return LinkDiagram(d.crossings, tuple(range(top + 1, top + 1 + len(free))))


# ---------------------------------------------------------------------------
# operations

def mirror(D: LinkDiagram) -> LinkDiagram:
    """Switch every crossing; slots are re-read from the new under-strand."""
    out = []
    for c in D.crossings:
        e = c.edges
        if c.sign > 0:
            out.append(Crossing((e[1], e[2], e[3], e[0]), -1))
        else:
            out.append(Crossing((e[3], e[0], e[1], e[2]), 1))
    return LinkDiagram(tuple(out), D.loops, D.clockwise, D.basepoint)


def _as_bits(u, n: int) -> tuple[int, ...]:
    if isinstance(u, int):
        return tuple((u >> i) & 1 for i in range(n))
    u = tuple(int(x) for x in u)
    if len(u) != n:
        raise DiagramError(f"vertex has length {len(u)}, diagram has {n} crossings")
    if any(x not in (0, 1) for x in u):
        raise DiagramError("vertex entries must be 0 or 1")
    return u


def smoothing_circles(D: LinkDiagram, bits: Sequence[int]) -> tuple[frozenset, ...]:
    parent = {e: e for e in D.edges}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c, b in zip(D.crossings, bits):
        for s, t in SMOOTHING[b]:
            ra, rb = find(c.edges[s]), find(c.edges[t])
            if ra != rb:
                parent[ra] = rb
    groups: dict[int, set[int]] = {}
    for e in D.edges:
        groups.setdefault(find(e), set()).add(e)
    return tuple(sorted((frozenset(g) for g in groups.values()), key=min))


def resolve(D: LinkDiagram, u) -> Resolution:
    """Smooth crossing i according to u_i; ``u`` is a 0/1 sequence or a bitmask."""
    bits = _as_bits(u, D.n)
    return Resolution(bits, smoothing_circles(D, bits))


def oriented_resolution(D: LinkDiagram, o: Sequence[bool] | None = None) -> Resolution:
    o = D.orientation(o)
    return resolve(D, D.oriented_vertex(o))


def _directed(D: LinkDiagram, e: int, o: Sequence[bool]):
    tail, head = D.ends[e]
    return (tail, head) if o[D.component_of[e]] else (head, tail)


def left_is_shaded(D: LinkDiagram, e: int, o: Sequence[bool]) -> bool:
    """Colour of the region to the left of edge e travelled along ``o``."""
    if e in D.loops:
        ccw = e not in D.clockwise
        return ccw == bool(o[D.component_of[e]])
    _, head = _directed(D, e, o)
    return D.shading[D.face_of[head]] == 1


def checkerboard_labels(D: LinkDiagram, o: Sequence[bool] | None = None,
                        basepoint: int | None = None) -> CircleLabeling:
    """Tag Seifert circles: 'a' when the region left of the circle is shaded.

    With a basepoint the colouring is flipped if needed so that the region
    left of the basepoint is shaded, which tags the marked circle 'a'.
    """
    o = D.orientation(o)
    res = oriented_resolution(D, o)
    tags = []
    for c in res.circles:
        sides = {left_is_shaded(D, e, o) for e in c}
        if len(sides) != 1:
            raise DiagramError("Seifert circle borders regions of both colours")
        tags.append("a" if sides.pop() else "b")
    tags = tuple(tags)
    lab = CircleLabeling(res, tags)
    if basepoint is not None:
        if basepoint not in D.edges:
            raise DiagramError(f"basepoint {basepoint} is not on the diagram")
        if lab.tags[res.circle_of(basepoint)] != "a":
            lab = lab.swapped()
    return lab


def seifert_circle_count(D: LinkDiagram, o: Sequence[bool] | None = None) -> int:
    return len(oriented_resolution(D, o).circles)
