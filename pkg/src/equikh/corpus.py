"""Named test diagrams with their known profile values."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .diagram import LinkDiagram, braid_closure, disjoint_union, parse_pd, unknot, unlink

TREFOIL_PD = "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]"
KINK_PD = "PD[X[1,4,2,3]]"


@dataclass(frozen=True)
class Entry:
    name: str
    build: Callable[[], LinkDiagram]
    expected: int | None = None      # constant s_t, where known
    knot: bool = True

    def diagram(self) -> LinkDiagram:
        return self.build()


def trefoil() -> LinkDiagram:
    return parse_pd(TREFOIL_PD)


def one_crossing_unknot() -> LinkDiagram:
    return parse_pd(KINK_PD)


def torus_3_m4() -> LinkDiagram:
    return braid_closure([-1, -2] * 4)


CORPUS: tuple[Entry, ...] = (
    Entry("unknot", unknot, 0),
    Entry("unknot-kink", one_crossing_unknot, 0),
    Entry("trefoil", trefoil, 2),
    Entry("trefoil-braid", lambda: braid_closure([1, 1, 1]), 2),
    Entry("trefoil-kink", lambda: braid_closure([1, 1, 1, 2]), 2),
    Entry("figure-eight", lambda: braid_closure([1, -2, 1, -2]), 0),
    Entry("hopf", lambda: braid_closure([1, 1]), None, knot=False),
    Entry("unlink-2", lambda: unlink(2), 1, knot=False),
    Entry("trefoil+unknot", lambda: disjoint_union(trefoil(), unknot()), 3, knot=False),
    Entry("trefoil#trefoil", lambda: braid_closure([1, 1, 1, 2, 2, 2]), 4),
    Entry("T(3,-4)", torus_3_m4, -6),
)

BY_NAME = {e.name: e for e in CORPUS}


def grid(q: int = 8) -> list[Fraction]:
    return [Fraction(k, q) for k in range(2 * q + 1)]
