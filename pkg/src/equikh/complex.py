"""Graded chain complexes over R = F[U,V]: the cube of resolutions and friends."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .algebra import F2, QQ, Field, Poly
from .diagram import LinkDiagram, mirror, smoothing_circles
from .frobenius import AlgebraElem, comult, mult, vertex_sign

__all__ = [
    "Generator", "GradedChainComplex", "ComplexError", "build_cube", "reduced_subcomplex",
    "scan_reduce", "mirror_dual", "verify_mirror_duality", "DualityCheck", "DEFAULT_CUBE_CAP",
]

DEFAULT_CUBE_CAP = 12

Chain = dict  # generator index -> Poly


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    degree: int
    grq: int
    label: Hashable


class GradedChainComplex:
    """Free R-modules per homological degree with a sparse differential.

    ``diff[h][j]`` maps target index i (in degree h+1) to the coefficient of
    generator i in d(generator j of degree h).
    """

    def __init__(self, field_: Field, gens: dict[int, list[Generator]],
                 diff: dict[int, dict[int, dict[int, Poly]]] | None = None):
        self.field = field_
        self.gens = {h: list(g) for h, g in sorted(gens.items()) if g}
        self.diff = {}
        for h, cols in (diff or {}).items():
            cols = {j: {i: p for i, p in col.items() if p} for j, col in cols.items()}
            cols = {j: c for j, c in cols.items() if c}
            if cols:
                self.diff[h] = cols
        self._index = {g.label: (h, i) for h, gs in self.gens.items() for i, g in enumerate(gs)}

    # access -------------------------------------------------------------
    @property
    def degrees(self) -> list[int]:
        return sorted(self.gens)

    def size(self, h: int | None = None) -> int:
        if h is None:
            return sum(len(g) for g in self.gens.values())
        return len(self.gens.get(h, ()))

    def index(self, label) -> tuple[int, int]:
        return self._index[label]

    def column(self, h: int, j: int) -> dict[int, Poly]:
        return self.diff.get(h, {}).get(j, {})

    def rows(self, h: int) -> list[dict[int, Poly]]:
        """d_h as sparse rows (indexed by degree h+1 generators)."""
        rows: list[dict] = [{} for _ in range(self.size(h + 1))]
        for j, col in self.diff.get(h, {}).items():
            for i, p in col.items():
                rows[i][j] = p
        return rows

    def apply_d(self, h: int, z: Chain) -> Chain:
        out: Chain = {}
        for j, c in z.items():
            for i, p in self.column(h, j).items():
                v = c * p
                w = out.get(i)
                v = v if w is None else w + v
                if v:
                    out[i] = v
                else:
                    out.pop(i, None)
        return out

    def max_grq(self, h: int) -> int | None:
        return max((g.grq for g in self.gens.get(h, ())), default=None)

    # checks -------------------------------------------------------------
    def check_d_squared(self) -> bool:
        for h in self.diff:
            for j in self.diff[h]:
                if self.apply_d(h + 1, self.column(h, j)):
                    return False
        return True

    def check_homogeneous(self) -> bool:
        """Every entry p from g to g' satisfies gr_q(g') - 2 deg(monomial) = gr_q(g)."""
        for h, cols in self.diff.items():
            for j, col in cols.items():
                g = self.gens[h][j].grq
                for i, p in col.items():
                    tgt = self.gens[h + 1][i].grq
                    for m, n in p.terms:
                        if tgt - 2 * (m + n) != g:
                            return False
        return True

    def validate(self) -> None:
        if not self.check_d_squared():
            raise ComplexError("d^2 != 0")
        if not self.check_homogeneous():
            raise ComplexError("differential does not preserve the quantum grading")

    # transformations ----------------------------------------------------
    def map_polys(self, fn) -> "GradedChainComplex":
        diff = {h: {j: {i: fn(p) for i, p in col.items()} for j, col in cols.items()}
                for h, cols in self.diff.items()}
        return GradedChainComplex(self.field, self.gens, diff)

    def set_u_zero(self) -> "GradedChainComplex":
        return self.map_polys(lambda p: p.set_u_zero())

    def __eq__(self, other):
        if not isinstance(other, GradedChainComplex):
            return NotImplemented
        return (self.field == other.field and self.gens == other.gens
                and self.diff == other.diff)

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "field": self.field.name,
            "generators": {str(h): [[g.grq, _label_json(g.label)] for g in gs]
                           for h, gs in self.gens.items()},
            "differential": [[h, j, i, p.to_json()]
                             for h, cols in sorted(self.diff.items())
                             for j, col in sorted(cols.items())
                             for i, p in sorted(col.items())],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict | str) -> "GradedChainComplex":
        if isinstance(data, str):
            data = json.loads(data)
        F = Field.parse(data["field"])
        gens = {int(h): [Generator(int(h), int(q), _label_from(lab)) for q, lab in gs]
                for h, gs in data["generators"].items()}
        diff: dict = {}
        for h, j, i, terms in data["differential"]:
            diff.setdefault(h, {}).setdefault(j, {})[i] = Poly.from_json(terms, F)
        return cls(F, gens, diff)

    def __repr__(self):
        sizes = ", ".join(f"{h}:{len(g)}" for h, g in self.gens.items())
        return f"GradedChainComplex({self.field.name}; {sizes})"


def _label_json(lab):
    if isinstance(lab, tuple):
        return [_label_json(x) for x in lab]
    return lab


def _label_from(x):
    if isinstance(x, list):
        return tuple(_label_from(y) for y in x)
    return x


# ---------------------------------------------------------------------------
# cube of resolutions

def _bits(u: int, n: int) -> tuple[int, ...]:
    return tuple((u >> i) & 1 for i in range(n))


def _edge_map(src: tuple[frozenset, ...], tgt: tuple[frozenset, ...], F: Field):
    """Merge or split data between adjacent resolutions.

    Returns (kind, moved source indices, moved target indices, fixed pairs).
    """
    tpos = {c: i for i, c in enumerate(tgt)}
    fixed, moved_s = [], []
    for i, c in enumerate(src):
        if c in tpos:
            fixed.append((i, tpos[c]))
        else:
            moved_s.append(i)
    used = {t for _, t in fixed}
    moved_t = [i for i in range(len(tgt)) if i not in used]
    kind = "merge" if len(moved_s) == 2 else "split"
    if sorted((len(moved_s), len(moved_t))) != [1, 2]:
        raise ComplexError("saddle does not change the circle count by one")
    return kind, moved_s, moved_t, fixed


def build_cube(D: LinkDiagram, field_: Field = F2, max_crossings: int = DEFAULT_CUBE_CAP
               ) -> GradedChainComplex:
    """The full cube complex; generator labels are (u bits, circle label mask)."""
    n = D.n
    if n > max_crossings:
        raise ComplexError(f"{n} crossings exceeds the full-cube cap of {max_crossings}")
    F = field_
    shift = D.n_plus - 2 * D.n_minus
    circles = [smoothing_circles(D, _bits(u, n)) for u in range(1 << n)]
    gens: dict[int, list[Generator]] = {}
    for u in range(1 << n):
        w = bin(u).count("1")
        h = w - D.n_minus
        k = len(circles[u])
        for mask in range(1 << k):
            x = bin(mask).count("1")
            gens.setdefault(h, []).append(
                Generator(h, (k - x) - x + w + shift, (_bits(u, n), mask)))
    for h in gens:
        gens[h].sort(key=lambda g: (g.label[0][::-1], g.label[1]))
    index = {g.label: i for gs in gens.values() for i, g in enumerate(gs)}
    basis = (AlgebraElem.one(F), AlgebraElem.x(F))
    diff: dict = {}
    for u in range(1 << n):
        h = bin(u).count("1") - D.n_minus
        ub = _bits(u, n)
        for j in range(n):
            if (u >> j) & 1:
                continue
            v = u | (1 << j)
            vb = _bits(v, n)
            sign = -1 if (F.p != 2 and bin(u & ((1 << j) - 1)).count("1") % 2) else 1
            kind, ms, mt, fixed = _edge_map(circles[u], circles[v], F)
            for mask in range(1 << len(circles[u])):
                base = 0
                for s, t in fixed:
                    if (mask >> s) & 1:
                        base |= 1 << t
                col = diff.setdefault(h, {}).setdefault(index[(ub, mask)], {})
                if kind == "merge":
                    a = basis[(mask >> ms[0]) & 1]
                    b = basis[(mask >> ms[1]) & 1]
                    prod = mult(a, b)
                    outs = {0: prod.c0, 1: prod.c1}
                    terms = {base | (bit << mt[0]): c for bit, c in outs.items()}
                else:
                    a = basis[(mask >> ms[0]) & 1]
                    terms = {base | (l << mt[0]) | (r << mt[1]): c
                             for (l, r), c in comult(a).items()}
                for tm, c in terms.items():
                    if not c:
                        continue
                    i = index[(vb, tm)]
                    val = c if sign == 1 else -c
                    col[i] = col[i] + val if i in col else val
    return GradedChainComplex(F, gens, diff)


def _marked_index(D: LinkDiagram, ub: tuple[int, ...], p: int) -> int:
    for i, c in enumerate(smoothing_circles(D, ub)):
        if p in c:
            return i
    raise ComplexError(f"basepoint {p} not found")


def reduced_subcomplex(C: GradedChainComplex, D: LinkDiagram, basepoint: int | None = None
                       ) -> GradedChainComplex:
    """Subcomplex with X - U on the marked circle, quantum grading shifted up by 1.

    Generator (u, mask) stands for (X-U) on the marked circle tensored with the
    labels of ``mask`` elsewhere; the marked bit of ``mask`` is always set.
    """
    p = basepoint if basepoint is not None else D.basepoint
    if p is None:
        raise ComplexError("reduced complex needs a basepoint")
    if p not in D.edges:
        raise ComplexError(f"basepoint {p} is not an edge of the diagram")
    F = C.field
    U = Poly.U(F)
    marked: dict[tuple, int] = {}
    gens: dict[int, list[Generator]] = {}
    for h, gs in C.gens.items():
        for g in gs:
            ub, mask = g.label
            if ub not in marked:
                marked[ub] = _marked_index(D, ub, p)
            if (mask >> marked[ub]) & 1:
                gens.setdefault(h, []).append(Generator(h, g.grq + 1, g.label))
    rindex = {g.label: i for gs in gens.values() for i, g in enumerate(gs)}
    diff: dict = {}
    for h, gs in gens.items():
        for j, g in enumerate(gs):
            ub, mask = g.label
            hx, jx = C.index(g.label)
            h1, j1 = C.index((ub, mask & ~(1 << marked[ub])))
            img = dict(C.column(hx, jx))
            for i, c in C.column(h1, j1).items():
                v = img.get(i, Poly.zero(F)) - U * c
                if v:
                    img[i] = v
                else:
                    img.pop(i, None)
            col = {}
            for i, c in img.items():
                tl = C.gens[h + 1][i].label
                tb, tm = tl
                bit = 1 << marked[tb]
                if tm & bit:
                    partner = C.index((tb, tm & ~bit))[1]
                    if img.get(partner, Poly.zero(F)) != -(U * c):
                        raise ComplexError("image leaves the X - U subcomplex")
                    col[rindex[tl]] = c
                elif C.index((tb, tm | bit))[1] not in img:
                    raise ComplexError("image leaves the X - U subcomplex")
            if col:
                diff.setdefault(h, {})[j] = col
    return GradedChainComplex(F, gens, diff)


def mirror_dual(C: GradedChainComplex) -> GradedChainComplex:
    """Dual complex: degree -h holds the dual of degree h; d is transposed, gr_q negated."""
    gens = {}
    for h, gs in C.gens.items():
        gens[-h] = [Generator(-h, -g.grq, _dual_label(g.label)) for g in gs]
    diff: dict = {}
    for h, cols in C.diff.items():
        # d_h: C_h -> C_{h+1}; dual goes from -(h+1) to -h
        for j, col in cols.items():
            for i, p in col.items():
                diff.setdefault(-h - 1, {}).setdefault(i, {})[j] = p
    return GradedChainComplex(C.field, gens, diff)


def _dual_label(lab):
    if isinstance(lab, tuple) and len(lab) == 2 and lab[0] == "*":
        return lab[1]
    return ("*", lab)


# ---------------------------------------------------------------------------
# mirror duality

@dataclass
class DualityCheck:
    ok: bool
    detail: str = ""

    def __bool__(self):
        return self.ok


def _gamma_terms(mask: int, k: int, F: Field) -> dict[int, Poly]:
    """gamma on each tensor factor: 1 -> X^*, X -> 1^* + (U+V) X^*."""
    out = {0: Poly.one(F)}
    upv = Poly({(1, 0): 1, (0, 1): 1}, F)
    for i in range(k):
        nxt = {}
        for m, c in out.items():
            if (mask >> i) & 1:
                nxt[m] = c
                nxt[m | (1 << i)] = c * upv
            else:
                nxt[m | (1 << i)] = c
        out = nxt
    return out


def verify_mirror_duality(D: LinkDiagram, field_: Field = QQ, reduced: bool = False,
                          basepoint: int | None = None) -> DualityCheck:
    """Check that the vertex-wise gamma map intertwines CKh(D) with CKh(mirror D)^!."""
    n = D.n
    Dm = mirror(D)
    C = build_cube(D, field_)
    Cm = build_cube(Dm, field_)
    p = None
    if reduced:
        p = basepoint if basepoint is not None else (D.basepoint or D.default_basepoint())
        C = reduced_subcomplex(C, D, p)
        Cm = reduced_subcomplex(Cm, Dm, p)
    Cd = mirror_dual(Cm)
    F = field_
    full = (1 << n) - 1

    def gamma_image(h: int, j: int) -> dict[int, Poly]:
        ub, mask = C.gens[h][j].label
        u = sum(b << i for i, b in enumerate(ub))
        vb = _bits(full ^ u, n)
        k = len(smoothing_circles(D, ub))
        if smoothing_circles(Dm, vb) != smoothing_circles(D, ub):
            raise ComplexError("mirror resolution has different circles")
        sgn = vertex_sign(u, n) if F.p != 2 else 1
        out = {}
        if reduced:
            mk = _marked_index(D, ub, p)
            rest_bits = [i for i in range(k) if i != mk]
            sub = 0
            for t, i in enumerate(rest_bits):
                if (mask >> i) & 1:
                    sub |= 1 << t
            for m, c in _gamma_terms(sub, len(rest_bits), F).items():
                tm = 1 << mk
                for t, i in enumerate(rest_bits):
                    if (m >> t) & 1:
                        tm |= 1 << i
                out[Cd.index(("*", (vb, tm)))[1]] = c if sgn == 1 else -c
        else:
            for m, c in _gamma_terms(mask, k, F).items():
                out[Cd.index(("*", (vb, m)))[1]] = c if sgn == 1 else -c
        return out

    for h, gs in C.gens.items():
        for j, g in enumerate(gs):
            gi = gamma_image(h, j)
            for i, c in gi.items():
                tg = Cd.gens[h][i]
                if any(tg.grq - 2 * (a + b) != g.grq for a, b in c.terms):
                    return DualityCheck(False, f"gamma breaks grading at {g.label}")
            lhs: dict = {}
            for i, c in C.column(h, j).items():
                for k2, v in gamma_image(h + 1, i).items():
                    w = lhs.get(k2, Poly.zero(F)) + c * v
                    lhs[k2] = w
            rhs = Cd.apply_d(h, gi)
            lhs = {k2: v for k2, v in lhs.items() if v}
            if lhs != rhs:
                return DualityCheck(False, f"intertwining fails on {g.label}: {lhs} vs {rhs}")
    return DualityCheck(True, "")


def scan_reduce(D: LinkDiagram, field_: Field = F2, basepoint: int | None = None,
                trace: bool | None = None):
    """Scanning reduction; see :mod:`equikh.scan`."""
    from .scan import scan_reduce as _scan
    return _scan(D, field_, basepoint=basepoint, trace=trace)
