"""The rank-two Frobenius algebra A = R[X]/((X-U)(X-V)) over R = F[U, V].

Elements are stored on the free basis {1, X}; gr(1) = 1, gr(X) = -1 and
gr(U) = gr(V) = -2.  Tensor powers of A are dictionaries keyed by label
tuples (0 for 1, 1 for X).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .algebra import Field, Poly

__all__ = [
    "AlgebraElem", "DualElem", "mult", "comult", "counit", "unit", "involution",
    "deloop_maps", "self_dual_iso", "SelfDuality", "idempotents",
    "iterated_comult", "x_power", "handle", "vertex_sign",
]

BASIS_GRADING = (1, -1)


class AlgebraElem:
    """c0*1 + c1*X with c0, c1 in R."""

    __slots__ = ("c0", "c1")

    def __init__(self, c0: Poly, c1: Poly):
        self.c0, self.c1 = c0, c1

    @classmethod
    def one(cls, F: Field) -> "AlgebraElem":
        return cls(Poly.one(F), Poly.zero(F))

    @classmethod
    def x(cls, F: Field) -> "AlgebraElem":
        return cls(Poly.zero(F), Poly.one(F))

    @classmethod
    def basis(cls, i: int, F: Field) -> "AlgebraElem":
        return cls.x(F) if i else cls.one(F)

    @property
    def field(self) -> Field:
        return self.c0.field

    def coeffs(self) -> tuple[Poly, Poly]:
        return (self.c0, self.c1)

    def __add__(self, o):
        return AlgebraElem(self.c0 + o.c0, self.c1 + o.c1)

    def __sub__(self, o):
        return AlgebraElem(self.c0 - o.c0, self.c1 - o.c1)

    def __neg__(self):
        return AlgebraElem(-self.c0, -self.c1)

    def __mul__(self, o):
        if isinstance(o, AlgebraElem):
            return mult(self, o)
        return AlgebraElem(self.c0 * o, self.c1 * o)

    __rmul__ = __mul__

    def __eq__(self, o):
        return isinstance(o, AlgebraElem) and self.c0 == o.c0 and self.c1 == o.c1

    def __hash__(self):
        return hash((self.c0, self.c1))

    def __bool__(self):
        return bool(self.c0) or bool(self.c1)

    def gradings(self) -> set[int]:
        """Gradings of the monomial summands."""
        out = set()
        for i, c in enumerate(self.coeffs()):
            for m, n in c.terms:
                out.add(BASIS_GRADING[i] - 2 * (m + n))
        return out

    def __repr__(self):
        return f"({self.c0})*1 + ({self.c1})*X"


def _uv(F: Field) -> tuple[Poly, Poly]:
    return Poly.U(F), Poly.V(F)


def mult(a: AlgebraElem, b: AlgebraElem) -> AlgebraElem:
    """Product, reduced with X^2 = (U+V)X - UV."""
    U, V = _uv(a.field)
    xx = a.c1 * b.c1
    c0 = a.c0 * b.c0 - U * V * xx
    c1 = a.c0 * b.c1 + a.c1 * b.c0 + (U + V) * xx
    return AlgebraElem(c0, c1)


def comult(a: AlgebraElem) -> dict[tuple[int, int], Poly]:
    """Delta(1) = X(x)1 + 1(x)X - (U+V) 1(x)1,  Delta(X) = X(x)X - UV 1(x)1."""
    F = a.field
    U, V = _uv(F)
    out = {
        (0, 0): -(U + V) * a.c0 - U * V * a.c1,
        (1, 0): a.c0,
        (0, 1): a.c0,
        (1, 1): a.c1,
    }
    return {k: v for k, v in out.items() if v}


def counit(a: AlgebraElem) -> Poly:
    return a.c1


def unit(r: Poly) -> AlgebraElem:
    return AlgebraElem(r, Poly.zero(r.field))


def involution(a: AlgebraElem) -> AlgebraElem:
    """R-linear algebra involution with X -> U + V - X."""
    U, V = _uv(a.field)
    return AlgebraElem(a.c0 + (U + V) * a.c1, -a.c1)


def x_power(k: int, F: Field) -> AlgebraElem:
    return _x_power(k, F)


@lru_cache(maxsize=None)
def _x_power(k: int, F: Field) -> AlgebraElem:
    if k == 0:
        return AlgebraElem.one(F)
    return mult(_x_power(k - 1, F), AlgebraElem.x(F))


def handle(F: Field) -> AlgebraElem:
    """m(Delta(1)) = 2X - (U+V): the value of a handle."""
    U, V = _uv(F)
    return AlgebraElem(-(U + V), Poly.const(2, F))


def iterated_comult(a: AlgebraElem, b: int) -> dict[int, Poly]:
    """Delta^(b-1)(a) in A^{(x)b}, keyed by bitmask (bit i set = X on factor i)."""
    if b < 1:
        raise ValueError("need at least one output factor")
    cur = {0: a.c0, 1: a.c1}
    cur = {k: v for k, v in cur.items() if v}
    F = a.field
    for i in range(1, b):
        nxt: dict[int, Poly] = {}
        bit = 1 << i
        for mask, c in cur.items():
            # split the last factor (index i-1) into factors i-1 and i
            last = (mask >> (i - 1)) & 1
            rest = mask & ~(1 << (i - 1))
            piece = AlgebraElem(c, Poly.zero(F)) if not last else AlgebraElem(Poly.zero(F), c)
            for (l, r), v in comult(piece).items():
                key = rest | (l << (i - 1)) | (r * bit)
                nxt[key] = nxt[key] + v if key in nxt else v
        cur = {k: v for k, v in nxt.items() if v}
    return cur


@lru_cache(maxsize=None)
def surface_value(dots: int, genus: int, boundary: int, F: Field) -> tuple[tuple[int, Poly], ...]:
    """Connected surface with ``dots`` dots, given genus and boundary count.

    Returns the element of A^{(x)boundary} (as mask/coefficient pairs) obtained
    by viewing every boundary circle as outgoing; for a closed surface the
    single entry under mask 0 is the scalar evaluation.
    """
    a = _x_power(dots, F)
    h = handle(F)
    for _ in range(genus):
        a = mult(a, h)
    if boundary == 0:
        c = counit(a)
        return ((0, c),) if c else ()
    return tuple(sorted(iterated_comult(a, boundary).items()))


def deloop_maps(F: Field) -> tuple[Callable, Callable]:
    """Inverse isomorphisms A <-> R{+1} (+) R{-1} from the trace pairing.

    ``split(a)`` pairs a against the dual basis {X - (U+V), 1}; ``merge``
    rebuilds c_plus*1 + c_minus*X.
    """
    U, V = _uv(F)
    dual_of_one = AlgebraElem(-(U + V), Poly.one(F))
    dual_of_x = AlgebraElem.one(F)

    def split(a: AlgebraElem) -> tuple[Poly, Poly]:
        return counit(mult(a, dual_of_one)), counit(mult(a, dual_of_x))

    def merge(pair: tuple[Poly, Poly]) -> AlgebraElem:
        return AlgebraElem(pair[0], pair[1])

    return split, merge


def idempotents(F: Field) -> tuple[AlgebraElem, AlgebraElem]:
    """Numerators of e1 = (X-U)/(V-U) and e2 = -(X-V)/(V-U)."""
    U, V = _uv(F)
    return AlgebraElem(-U, Poly.one(F)), AlgebraElem(V, -Poly.one(F))


def vertex_sign(u: int, n: int) -> int:
    """Sign (-1)^(sum_j j*u_j) making the mirror identification a chain map."""
    s = 0
    for j in range(n):
        if (u >> j) & 1:
            s += j
    return -1 if s & 1 else 1


# ---------------------------------------------------------------------------
# dual Frobenius system

class DualElem:
    """d0*1^* + d1*X^* in A^* = Hom_R(A, R)."""

    __slots__ = ("d0", "d1")

    def __init__(self, d0: Poly, d1: Poly):
        self.d0, self.d1 = d0, d1

    def __call__(self, a: AlgebraElem) -> Poly:
        return self.d0 * a.c0 + self.d1 * a.c1

    def __add__(self, o):
        return DualElem(self.d0 + o.d0, self.d1 + o.d1)

    def __eq__(self, o):
        return isinstance(o, DualElem) and self.d0 == o.d0 and self.d1 == o.d1

    def gradings(self) -> set[int]:
        out = set()
        for i, c in enumerate((self.d0, self.d1)):
            for m, n in c.terms:
                out.add(-BASIS_GRADING[i] - 2 * (m + n))
        return out

    def __repr__(self):
        return f"({self.d0})*1^* + ({self.d1})*X^*"


def _dual_basis(i: int, F: Field) -> DualElem:
    one, zero = Poly.one(F), Poly.zero(F)
    return DualElem(zero, one) if i else DualElem(one, zero)


def dual_mult(f: DualElem, g: DualElem) -> DualElem:
    """Delta^*: A^*(x)A^* -> A^*, (f(x)g)(Delta a)."""
    F = f.d0.field
    out = []
    for i in (0, 1):
        val = Poly.zero(F)
        for (l, r), c in comult(AlgebraElem.basis(i, F)).items():
            val = val + c * _coord(f, l) * _coord(g, r)
        out.append(val)
    return DualElem(*out)


def dual_comult(f: DualElem) -> dict[tuple[int, int], Poly]:
    """m^*: A^* -> A^*(x)A^*, coefficient of i^*(x)j^* is f(i*j)."""
    F = f.d0.field
    out = {}
    for i in (0, 1):
        for j in (0, 1):
            v = f(mult(AlgebraElem.basis(i, F), AlgebraElem.basis(j, F)))
            if v:
                out[(i, j)] = v
    return out


def dual_unit(r: Poly) -> DualElem:
    """epsilon^*: R -> A^*, r -> r*epsilon."""
    return DualElem(Poly.zero(r.field), r)


def dual_counit(f: DualElem) -> Poly:
    """iota^*: A^* -> R, evaluation at 1."""
    return f.d0


def _coord(f: DualElem, i: int) -> Poly:
    return f.d1 if i else f.d0


def gamma(a: AlgebraElem) -> DualElem:
    """The grading-preserving isomorphism 1 -> X^*, X -> 1^* + (U+V) X^*."""
    U, V = _uv(a.field)
    return DualElem(a.c1, a.c0 + (U + V) * a.c1)


def phi(a: AlgebraElem) -> AlgebraElem:
    """A -> A' = R[X]/((X+U)(X+V)), X -> X + U + V."""
    U, V = _uv(a.field)
    return AlgebraElem(a.c0 + (U + V) * a.c1, a.c1)


def comult_prime(a: AlgebraElem) -> dict[tuple[int, int], Poly]:
    """Comultiplication of A': Delta'(1) = (X+U)(x)1 + 1(x)(X+V), Delta'(X) = X(x)X - UV."""
    F = a.field
    U, V = _uv(F)
    out = {
        (0, 0): (U + V) * a.c0 - U * V * a.c1,
        (1, 0): a.c0,
        (0, 1): a.c0,
        (1, 1): a.c1,
    }
    return {k: v for k, v in out.items() if v}


def _tensor_map(f, t: dict[tuple[int, int], Poly], F: Field) -> dict:
    """Apply f (x) f to an element of A(x)A, f returning AlgebraElem."""
    out: dict = {}
    for (i, j), c in t.items():
        a, b = f(AlgebraElem.basis(i, F)), f(AlgebraElem.basis(j, F))
        for k, x in enumerate(a.coeffs()):
            for l, y in enumerate(b.coeffs()):
                v = c * x * y
                if v:
                    out[(k, l)] = out[(k, l)] + v if (k, l) in out else v
    return {k: v for k, v in out.items() if v}


def _tensor_gamma(t: dict[tuple[int, int], Poly], F: Field) -> dict:
    out: dict = {}
    for (i, j), c in t.items():
        a, b = gamma(AlgebraElem.basis(i, F)), gamma(AlgebraElem.basis(j, F))
        for k, x in enumerate((a.d0, a.d1)):
            for l, y in enumerate((b.d0, b.d1)):
                v = c * x * y
                if v:
                    out[(k, l)] = out[(k, l)] + v if (k, l) in out else v
    return {k: v for k, v in out.items() if v}


@dataclass(frozen=True)
class SelfDuality:
    field: Field
    checks: dict

    def gamma(self, a: AlgebraElem) -> DualElem:
        return gamma(a)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def self_dual_iso(F: Field) -> SelfDuality:
    """Build gamma: A -> A^* and check it identifies A with its dual system.

    Raises AssertionError if an identity fails.
    """
    U, V = _uv(F)
    one, zero = Poly.one(F), Poly.zero(F)
    basis = [AlgebraElem.basis(i, F) for i in (0, 1)]
    checks: dict[str, bool] = {}

    checks["unit_to_dual_counit"] = gamma(unit(one)) == dual_unit(one)
    checks["counit_to_dual_unit"] = all(dual_counit(gamma(b)) == counit(b) for b in basis)
    ok = True
    for a in basis:
        for b in basis:
            lhs = gamma(mult(a, b))
            rhs = dual_mult(gamma(a), gamma(b))
            ok &= lhs == rhs
    checks["mult_to_dual_comult"] = ok
    ok = True
    for a in basis:
        lhs = _tensor_gamma(comult(a), F)
        rhs = dual_comult(gamma(a))
        ok &= lhs == rhs
    checks["comult_to_dual_mult"] = ok
    ok = True
    for a in basis:
        ok &= comult_prime(phi(a)) == _tensor_map(phi, comult(a), F)
    checks["phi_intertwines_comult"] = ok
    checks["gamma_preserves_grading"] = all(
        gamma(b).gradings() == {BASIS_GRADING[i]} for i, b in enumerate(basis))
    failed = [k for k, v in checks.items() if not v]
    if failed:
        raise AssertionError(f"self-duality identities failed: {failed}")
    return SelfDuality(F, checks)
