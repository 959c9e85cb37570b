"""Exact arithmetic over a field F and the bivariate ring R = F[U, V].

Polynomials are sparse maps ``(m, n) -> c`` standing for ``c * U^m * V^n``.
Everything is exact: coefficients are integers reduced mod p, or
``fractions.Fraction`` over the rationals.

Rank and column-span questions over the fraction field Frac(R) are answered
with fraction-free (Bareiss) elimination, so intermediate entries stay
polynomial.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Field", "F2", "QQ", "Poly", "NotDivisible",
    "poly_add", "poly_mul", "divide_exact", "vu_divisibility",
    "ffge_rank", "in_column_span", "left_kernel",
    "parse_poly", "format_poly", "matrix_to_json", "matrix_from_json",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """A prime field F_p (p > 0) or the rationals (p == 0)."""

    __slots__ = ("p",)

    def __init__(self, p: int = 2):
        if p != 0 and not _is_prime(p):
            raise ValueError(f"field characteristic must be 0 or prime, got {p}")
        self.p = p

    @classmethod
    def parse(cls, text: str) -> "Field":
        t = text.strip().lower()
        if t in ("f2", "gf2"):
            return cls(2)
        if t in ("q", "qq", "rationals"):
            return cls(0)
        m = re.fullmatch(r"(?:fp|gf)[:(]?(\d+)\)?", t)
        if m:
            return cls(int(m.group(1)))
        raise ValueError(f"unknown field {text!r} (expected f2, q or fp:P)")

    @property
    def name(self) -> str:
        if self.p == 0:
            return "q"
        if self.p == 2:
            return "f2"
        return f"fp:{self.p}"

    def __call__(self, x) -> int | Fraction:
        p = self.p
        if p == 0:
            x = Fraction(x)
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, p) % p
        return x % p

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.p == 0:
            return Fraction(1) / x
        return pow(x, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"Field({self.name})"


F2 = Field(2)
QQ = Field(0)


class NotDivisible(ArithmeticError):
    pass


def _norm(terms: dict, p: int) -> dict:
    if p:
        return {k: c % p for k, c in terms.items() if c % p}
    return {k: c for k, c in terms.items() if c}


class Poly:
    """Sparse polynomial in U and V with coefficients in ``field``.

    Instances are treated as immutable values; ``terms`` never holds zeros.
    """

    __slots__ = ("terms", "field")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None,
                 field: Field = F2, *, _clean: bool = False):
        self.field = field
        if not terms:
            self.terms = {}
        elif _clean:
            self.terms = terms  # type: ignore[assignment]
        else:
            self.terms = _norm({k: field(c) for k, c in terms.items()}, field.p)

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, c, field: Field = F2) -> "Poly":
        return cls({(0, 0): c}, field)

    @classmethod
    def monomial(cls, m: int, n: int, c=1, field: Field = F2) -> "Poly":
        return cls({(m, n): c}, field)

    @classmethod
    def zero(cls, field: Field = F2) -> "Poly":
        return cls({}, field)

    @classmethod
    def one(cls, field: Field = F2) -> "Poly":
        return cls({(0, 0): 1}, field)

    @classmethod
    def U(cls, field: Field = F2) -> "Poly":
        return cls({(1, 0): 1}, field)

    @classmethod
    def V(cls, field: Field = F2) -> "Poly":
        return cls({(0, 1): 1}, field)

    # predicates ---------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0, 0) in self.terms)

    def is_unit(self) -> bool:
        return len(self.terms) == 1 and (0, 0) in self.terms

    def constant(self):
        return self.terms.get((0, 0), 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((m + n for m, n in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((m + n for m, n in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({m + n for m, n in self.terms}) <= 1

    def __len__(self):
        return len(self.terms)

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(other, self.field)

    def __add__(self, other):
        other = self._coerce(other)
        p = self.field.p
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if p:
                v %= p
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Poly(out, self.field, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        if p == 2:
            return self
        if p:
            return Poly({k: (-c) % p for k, c in self.terms.items()}, self.field, _clean=True)
        return Poly({k: -c for k, c in self.terms.items()}, self.field, _clean=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly({}, self.field, _clean=True)
        if len(a) < len(b):
            a, b = b, a
        p = self.field.p
        out: dict = {}
        get = out.get
        for (m2, n2), c2 in b.items():
            for (m1, n1), c1 in a.items():
                k = (m1 + m2, n1 + n2)
                out[k] = get(k, 0) + c1 * c2
        return Poly(_norm(out, p), self.field, _clean=True)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = self.field(c)
        if not c:
            return Poly({}, self.field, _clean=True)
        if c == 1:
            return self
        p = self.field.p
        if p:
            return Poly({k: v * c % p for k, v in self.terms.items()}, self.field, _clean=True)
        return Poly({k: v * c for k, v in self.terms.items()}, self.field, _clean=True)

    def shift(self, m: int, n: int) -> "Poly":
        """Multiply by the monomial U^m V^n."""
        if not m and not n:
            return self
        return Poly({(a + m, b + n): c for (a, b), c in self.terms.items()},
                    self.field, _clean=True)

    def __pow__(self, k: int):
        out = Poly.one(self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return self.terms == Poly.const(other, self.field).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # substitutions ------------------------------------------------------
    def swap_uv(self) -> "Poly":
        return Poly({(n, m): c for (m, n), c in self.terms.items()}, self.field, _clean=True)

    def set_u_zero(self) -> "Poly":
        return Poly({k: c for k, c in self.terms.items() if k[0] == 0}, self.field, _clean=True)

    def dehomogenize_u(self) -> dict[int, object]:
        """Substitute U = 1, returning a univariate map ``n -> c``."""
        p = self.field.p
        out: dict[int, object] = {}
        for (m, n), c in self.terms.items():
            out[n] = out.get(n, 0) + c
        return _norm(out, p)

    def leading(self) -> tuple[tuple[int, int], object]:
        """Leading term in graded-lex order with U > V."""
        k = max(self.terms, key=lambda mn: (mn[0] + mn[1], mn[0]))
        return k, self.terms[k]

    def sorted_terms(self) -> list[tuple[tuple[int, int], object]]:
        return sorted(self.terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, {self.field.name})"

    # serialization ------------------------------------------------------
    def to_json(self) -> list:
        return [[_coeff_json(c), m, n] for (m, n), c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data: Iterable, field: Field = F2) -> "Poly":
        terms: dict = {}
        p = field.p
        for c, m, n in data:
            c = field(Fraction(c))
            terms[(m, n)] = terms.get((m, n), 0) + c
        return cls(terms, field)


def _coeff_json(c):
    if isinstance(c, Fraction):
        return str(c) if c.denominator != 1 else c.numerator
    return c


# ---------------------------------------------------------------------------
# text form

_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    pieces = []
    for (m, n), c in p.sorted_terms():
        neg = p.field.p == 0 and c < 0
        a = -c if neg else c
        factors = []
        if m:
            factors.append("U" if m == 1 else f"U^{m}")
        if n:
            factors.append("V" if n == 1 else f"V^{n}")
        if a != 1 or not factors:
            factors.insert(0, str(a))
        body = "*".join(factors)
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces)


def parse_poly(text: str, field: Field = F2) -> Poly:
    """Parse ``c*U^m*V^n`` terms joined by ``+``/``-``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    terms: dict = {}
    pos = 0
    first = True
    while pos < len(s):
        sign = 1
        if s[pos] in "+-":
            sign = -1 if s[pos] == "-" else 1
            pos += 1
        elif not first:
            raise ValueError(f"expected + or - at {pos} in {text!r}")
        end = pos
        while end < len(s) and s[end] not in "+-":
            end += 1
        body = s[pos:end]
        if not body:
            raise ValueError(f"dangling sign in {text!r}")
        coeff: Fraction = Fraction(sign)
        m = n = 0
        for f in body.split("*"):
            if not f:
                raise ValueError(f"bad term {body!r}")
            head, caret, exp = f.partition("^")
            k = 1
            if caret:
                if not exp.isdigit():
                    raise ValueError(f"bad exponent in {f!r}")
                k = int(exp)
            if head == "U":
                m += k
            elif head == "V":
                n += k
            elif re.fullmatch(r"\d+(/\d+)?", head) and not exp:
                coeff *= Fraction(head)
            else:
                raise ValueError(f"bad factor {f!r}")
        terms[(m, n)] = terms.get((m, n), 0) + field(coeff)
        pos = end
        first = False
    return Poly(terms, field)


# ---------------------------------------------------------------------------
# function forms of the ring operations

def poly_add(a: Poly, b: Poly) -> Poly:
    return a + b


def poly_mul(a: Poly, b: Poly) -> Poly:
    return a * b


def divide_exact(p: Poly, d: Poly) -> Poly | None:
    """Return q with p == q*d, or None when d does not divide p."""
    if not d:
        raise ZeroDivisionError("division by the zero polynomial")
    F = p.field
    if not p:
        return Poly.zero(F)
    if d.is_unit():
        return p.scale(F.inv(d.constant()))
    (dm, dn), dc = d.leading()
    dinv = F.inv(dc)
    rem = dict(p.terms)
    q: dict = {}
    key = lambda mn: (mn[0] + mn[1], mn[0])  # noqa: E731
    dterms = list(d.terms.items())
    pp = F.p
    while rem:
        (rm, rn) = max(rem, key=key)
        if rm < dm or rn < dn:
            return None
        c = rem[(rm, rn)] * dinv
        if pp:
            c %= pp
        sm, sn = rm - dm, rn - dn
        q[(sm, sn)] = c
        for (a, b), e in dterms:
            k = (a + sm, b + sn)
            v = rem.get(k, 0) - c * e
            if pp:
                v %= pp
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return Poly(q, F, _clean=True)


def vu_divisibility(p: Poly) -> int:
    """Largest k with (V - U)^k dividing p."""
    if not p:
        raise ValueError("(V-U)-adic valuation of zero is undefined")
    F = p.field
    d = Poly({(0, 1): 1, (1, 0): -1}, F)
    k = 0
    while True:
        q = divide_exact(p, d)
        if q is None:
            return k
        p, k = q, k + 1


# ---------------------------------------------------------------------------
# fraction-free elimination over Frac(R)

def _pivot_key(p: Poly) -> tuple[int, int]:
    return (len(p.terms), p.degree())


def _as_rows(M) -> list[dict]:
    """Accept dense lists of Poly or sparse row dicts; return sparse rows."""
    rows = []
    for row in M:
        if isinstance(row, dict):
            rows.append({j: e for j, e in row.items() if e})
        else:
            rows.append({j: e for j, e in enumerate(row) if e})
    return rows


def _bareiss(rows: list[dict], pivot_cols=None) -> tuple[int, list[dict], list[int]]:
    """Fraction-free elimination in place.

    Pivots are searched among the keys satisfying ``pivot_cols`` (all keys if
    None), picking the entry with fewest terms, then lowest degree.  Returns
    (rank, rows, pivot row order); rows past ``rank`` have no pivot-column
    entries left.
    """
    n = len(rows)
    order = list(range(n))
    prev: Poly | None = None
    rank = 0
    accept = (lambda j: True) if pivot_cols is None else pivot_cols
    while rank < n:
        best = None
        for ii in range(rank, n):
            r = rows[order[ii]]
            for j, e in r.items():
                if not accept(j):
                    continue
                k = _pivot_key(e)
                if best is None or k < best[0]:
                    best = (k, ii, j)
                    if k == (1, 0):
                        break
            if best is not None and best[0] == (1, 0):
                break
        if best is None:
            break
        _, ii, pc = best
        order[rank], order[ii] = order[ii], order[rank]
        prow = rows[order[rank]]
        piv = prow[pc]
        for jj in range(rank + 1, n):
            r = rows[order[jj]]
            a = r.pop(pc, None)
            new: dict = {}
            if a is None:
                # untouched row still has to be scaled for exactness
                for j, e in r.items():
                    v = piv * e
                    if prev is not None:
                        v = _exact(v, prev)
                    if v:
                        new[j] = v
            else:
                keys = set(r) | set(prow)
                keys.discard(pc)
                for j in keys:
                    e = r.get(j)
                    f = prow.get(j)
                    v = piv * e if e is not None else None
                    if f is not None:
                        w = a * f
                        v = -w if v is None else v - w
                    if v is None or not v:
                        continue
                    if prev is not None:
                        v = _exact(v, prev)
                    if v:
                        new[j] = v
            rows[order[jj]] = new
        prev = piv
        rank += 1
    return rank, [rows[i] for i in order], order


def _exact(v: Poly, d: Poly) -> Poly:
    q = divide_exact(v, d)
    if q is None:  # cannot happen for minors; guards against misuse
        raise NotDivisible(f"{v} is not divisible by {d}")
    return q


def ffge_rank(M: Sequence) -> int:
    """Rank over Frac(R) of a matrix of polynomials.

    ``M`` is a list of rows, each a list of :class:`Poly` or a sparse
    ``{col: Poly}`` dict.
    """
    rows = _as_rows(M)
    if not rows:
        return 0
    rank, _, _ = _bareiss(rows)
    return rank


def in_column_span(M: Sequence, z: Sequence[Poly]) -> bool:
    """True iff column ``z`` lies in the Frac(R)-span of the columns of M."""
    rows = _as_rows(M)
    if len(rows) != len(z):
        raise ValueError(f"row count mismatch: matrix has {len(rows)}, vector has {len(z)}")
    if not any(z):
        return True
    r0 = ffge_rank(rows) if rows else 0
    aug = []
    for row, e in zip(rows, z):
        r = dict(row)
        if e:
            r["z"] = e
        aug.append(r)
    return ffge_rank(aug) == r0


def left_kernel(M: Sequence, field: Field) -> list[dict]:
    """Polynomial vectors y (as ``{row: Poly}``) spanning {y : y M = 0} over Frac(R).

    Bareiss elimination on ``[M | I]``; the identity part of the rows that
    end without a pivot gives the kernel.
    """
    rows = _as_rows(M)
    one = Poly.one(field)
    aug = []
    for i, r in enumerate(rows):
        a = {("c", j): e for j, e in r.items()}
        a[("e", i)] = one
        aug.append(a)
    rank, out, _ = _bareiss(aug, pivot_cols=lambda key: key[0] == "c")
    return [{key[1]: e for key, e in r.items() if key[0] == "e"} for r in out[rank:]]


# ---------------------------------------------------------------------------
# matrix serialization

def matrix_to_json(M: Sequence[Sequence[Poly]]) -> str:
    return json.dumps([[e.to_json() for e in row] for row in M])


def matrix_from_json(text: str, field: Field = F2) -> list[list[Poly]]:
    data = json.loads(text)
    return [[Poly.from_json(e, field) for e in row] for row in data]
