"""Sparse elimination over the coefficient field (F2 bitsets, dicts otherwise)."""

from __future__ import annotations

from typing import Hashable, Iterable, Sequence

from .algebra import Field

__all__ = ["Eliminator", "field_rank", "field_nullspace"]


class Eliminator:
    """Incremental column reduction with a split between watched and payload rows.

    Each added vector is reduced against earlier pivots using only its
    ``watched`` coordinates.  When the watched part vanishes, the vector was a
    kernel combination and :meth:`add` returns its remaining payload part.
    """

    def __init__(self, field: Field):
        self.field = field
        self.binary = field.p == 2
        self._index: dict[Hashable, int] = {}
        self._pivots: dict = {}
        self.rank = 0

    def _bit(self, key) -> int:
        i = self._index.get(key)
        if i is None:
            i = self._index[key] = len(self._index)
        return i

    def add(self, watched: dict, payload: dict | None = None):
        """Reduce one vector; returns the payload residue if it became a kernel vector."""
        if self.binary:
            return self._add_f2(watched, payload or {})
        return self._add_dict(watched, payload or {})

    def _add_f2(self, watched, payload):
        w = 0
        for k, c in watched.items():
            if c % 2:
                w ^= 1 << self._bit(("w", k))
        pl = 0
        for k, c in payload.items():
            if c % 2:
                pl ^= 1 << self._bit(("p", k))
        piv = self._pivots
        while w:
            low = w & -w
            hit = piv.get(low)
            if hit is None:
                piv[low] = (w, pl)
                self.rank += 1
                return None
            w ^= hit[0]
            pl ^= hit[1]
        return pl

    def _add_dict(self, watched, payload):
        F = self.field
        w = {self._bit(("w", k)): F(c) for k, c in watched.items() if F(c)}
        pl = {self._bit(("p", k)): F(c) for k, c in payload.items() if F(c)}
        piv = self._pivots
        while w:
            low = min(w)
            hit = piv.get(low)
            if hit is None:
                inv = F.inv(w[low])
                piv[low] = ({k: F(v * inv) for k, v in w.items()},
                            {k: F(v * inv) for k, v in pl.items()})
                self.rank += 1
                return None
            c = w[low]
            for vec, src in ((w, hit[0]), (pl, hit[1])):
                for k, v in src.items():
                    x = F(vec.get(k, 0) - c * v)
                    if x:
                        vec[k] = x
                    else:
                        vec.pop(k, None)
        return pl


def field_rank(columns: Iterable[dict], field: Field) -> int:
    el = Eliminator(field)
    for col in columns:
        el.add(col)
    return el.rank


def field_nullspace(columns: Sequence[dict], field: Field) -> list[dict]:
    """Kernel basis of the matrix with the given sparse columns, as {column: coeff}."""
    el = Eliminator(field)
    out = []
    for j, col in enumerate(columns):
        res = el.add(col, {j: 1})
        if res is not None:
            if el.binary:
                inv = {v: k for k, v in el._index.items()}
                vec, b = {}, 0
                while res:
                    if res & 1:
                        vec[inv[b][1]] = 1
                    res >>= 1
                    b += 1
            else:
                inv = {v: k for k, v in el._index.items()}
                vec = {inv[b][1]: c for b, c in res.items()}
            out.append(vec)
    return out
