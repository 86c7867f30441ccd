"""Characteristic vectors and spin^c classes of a negative definite plumbing."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg
from .graph import GraphError, MarkedGraph, PlumbingGraph

CharVector = tuple[int, ...]


def is_characteristic(g: PlumbingGraph, k: Sequence[int]) -> bool:
    return len(k) == len(g) and all((a - m) % 2 == 0 for a, m in zip(k, g.framing))


def char_square(g: PlumbingGraph, k: Sequence[int]) -> Fraction:
    """K^2 = K^T M^{-1} K, exact."""
    if g.det == 0:
        raise ZeroDivisionError("singular intersection form")
    return linalg.quad(g.inverse, [Fraction(x) for x in k])


def shift(g: PlumbingGraph, k: Sequence[int], x: Sequence[int]) -> CharVector:
    """K + 2 M x."""
    mx = linalg.mat_vec(g.matrix, x)
    return tuple(a + 2 * b for a, b in zip(k, mx))


@lru_cache(maxsize=None)
def _hnf(g: PlumbingGraph) -> linalg.Matrix:
    return linalg.hermite_lower(g.matrix)


def class_key(g: PlumbingGraph, k: Sequence[int]) -> tuple[int, ...]:
    """Invariant of the class of K modulo 2 M Z^V."""
    if not is_characteristic(g, k):
        raise GraphError(f"{tuple(k)} is not characteristic")
    y = [(a - m) // 2 for a, m in zip(k, g.framing)]
    return linalg.reduce_mod_lattice(_hnf(g), y)


def same_class(g: PlumbingGraph, k1: Sequence[int], k2: Sequence[int]) -> bool:
    return class_key(g, k1) == class_key(g, k2)


def best_representative(g: PlumbingGraph, k: Sequence[int]) -> CharVector:
    """Member of the class of K with maximal square, ties broken lexicographically."""
    q = [[-x for x in row] for row in g.matrix]
    qinv = linalg.inverse(q)
    centre = [x / 2 for x in linalg.mat_vec(qinv, [Fraction(a) for a in k])]
    r = [round(c) for c in centre]
    d = [Fraction(a) - c for a, c in zip(r, centre)]
    bound = linalg.quad(q, d)
    cands = linalg.ellipsoid_points(q, centre, bound)
    best = max(cands, key=lambda x: (char_square(g, shift(g, k, x)), tuple(-a for a in shift(g, k, x))))
    return shift(g, k, best)


@dataclass(frozen=True)
class SpincClass:
    graph: PlumbingGraph
    representative: CharVector
    index: int

    @property
    def key(self) -> tuple[int, ...]:
        return class_key(self.graph, self.representative)

    @property
    def square(self) -> Fraction:
        return char_square(self.graph, self.representative)

    def to_dict(self) -> dict:
        return {"index": self.index, "representative": list(self.representative)}


@lru_cache(maxsize=None)
def spinc_classes(g: PlumbingGraph) -> tuple[SpincClass, ...]:
    g.require_definite()
    h = _hnf(g)
    reps = []
    for y in linalg.coset_box(h):
        k = tuple(m + 2 * a for m, a in zip(g.framing, y))
        reps.append(best_representative(g, k))
    reps.sort(key=lambda k: (-char_square(g, k), k))
    out = tuple(SpincClass(g, k, i) for i, k in enumerate(reps))
    assert len(out) == abs(g.det)
    return out


def class_of(g: PlumbingGraph, k: Sequence[int]) -> SpincClass:
    key = class_key(g, k)
    for s in spinc_classes(g):
        if s.key == key:
            return s
    raise AssertionError("characteristic vector outside every enumerated class")


def twist(s: SpincClass, marked: MarkedGraph, n: int) -> SpincClass:
    """Class of K + 2n (v0 restricted to G)."""
    if s.graph != marked.graph:
        raise GraphError("spin^c class lives on a different graph")
    k = tuple(a + 2 * n * b for a, b in zip(s.representative, marked.adjacency))
    return class_of(marked.graph, k)
