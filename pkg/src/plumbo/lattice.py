"""The lattice chain complex of a negative definite plumbing and its homology.

Internally a generator [K, E] of the class with base vector K0 is stored as
(x, mask): K = K0 + 2 M x, E = set bits of mask.  With the point weight

    chi(x) = -(K0(x) + x.x) / 2

the cube weight is the maximum of chi over the cube's corners, and

    gr[K, E] = (K0^2 + |V|)/4 - 2 * weight + |E|.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, NamedTuple, Sequence

from . import linalg
from .fu import (GradedFreeComplex, GradedModule, StructureError, TruncatedHomology, TruncationError,
                 truncated_homology)
from .graph import PlumbingGraph
from .spinc import CharVector, SpincClass, char_square, class_of, spinc_classes

Point = tuple[int, ...]


class CubeGenerator(NamedTuple):
    K: CharVector
    E: frozenset


# --- formula level, on characteristic vectors ------------------------------

def _idx(g: PlumbingGraph, e: Iterable[str]) -> list[int]:
    return sorted(g.index[v] for v in e)


def _f(g: PlumbingGraph, k: Sequence[int], subset: Sequence[int]) -> Fraction:
    s = [0] * len(g)
    for i in subset:
        s[i] = 1
    return Fraction(sum(k[i] for i in subset) + g.pair(s, s), 2)


def g_weight(g: PlumbingGraph, k: Sequence[int], e: Iterable[str]) -> int:
    """min over I subset of E of (K(I) + I.I)/2, the empty set included."""
    idx = _idx(g, e)
    best = Fraction(0)
    for mask in range(1 << len(idx)):
        sub = [idx[j] for j in range(len(idx)) if mask >> j & 1]
        best = min(best, _f(g, k, sub))
    assert best.denominator == 1
    return int(best)


def maslov_grading(g: PlumbingGraph, k: Sequence[int], e: Iterable[str]) -> Fraction:
    e = list(e)
    return 2 * g_weight(g, k, e) + len(e) + (char_square(g, k) + len(g)) / 4


def dual_shift(g: PlumbingGraph, k: Sequence[int], v: str) -> CharVector:
    """K + 2 v*, i.e. (K + 2v*)(u) = K(u) + 2 v.u."""
    row = g.matrix[g.index[v]]
    return tuple(a + 2 * b for a, b in zip(k, row))


def boundary(g: PlumbingGraph, k: Sequence[int], e: Iterable[str]) -> list[tuple[int, CubeGenerator]]:
    """Terms (U-exponent, face) of d[K, E]; faces with equal labels cancel mod 2."""
    e = frozenset(e)
    k = tuple(k)
    gk = g_weight(g, k, e)
    terms: dict[CubeGenerator, int] = {}
    for v in sorted(e):
        rest = e - {v}
        a = g_weight(g, k, rest) - gk
        k2 = dual_shift(g, k, v)
        half = Fraction(k[g.index[v]] + g.framing_of(v), 2)
        b = g_weight(g, k2, rest) - gk + half
        if a < 0 or b < 0 or Fraction(b).denominator != 1:
            raise StructureError(f"negative or fractional boundary exponent at {k}, {sorted(e)}")
        for t, face in ((a, CubeGenerator(k, rest)), (int(b), CubeGenerator(k2, rest))):
            if face in terms:
                del terms[face]
            else:
                terms[face] = int(t)
    return sorted(((t, f) for f, t in terms.items()), key=lambda p: (p[1].K, sorted(p[1].E)))


# --- truncations -----------------------------------------------------------

@dataclass(frozen=True)
class TruncationBox:
    """x in [-N, N]^V around the class representative, cubes with all corners inside."""

    radius: int


@dataclass(frozen=True)
class WeightTruncation:
    """All cubes whose corners have weight at most ``level`` above the minimum."""

    level: int


def chi(g: PlumbingGraph, k0: Sequence[int], x: Sequence[int]) -> int:
    v = linalg.dot(k0, x) + g.pair(x, x)
    assert v % 2 == 0
    return -v // 2


def sublevel_points(g: PlumbingGraph, k0: Sequence[int], level: int) -> list[Point]:
    """Integer x with chi(x) <= level."""
    q = [[-a for a in row] for row in g.matrix]
    qinv = linalg.inverse(q)
    centre = [c / 2 for c in linalg.mat_vec(qinv, [Fraction(a) for a in k0])]
    bound = 2 * level + linalg.quad(q, centre)
    return linalg.ellipsoid_points(q, centre, bound, accept=lambda x: chi(g, k0, x) <= level)


def min_chi(g: PlumbingGraph, k0: Sequence[int]) -> int:
    q = [[-a for a in row] for row in g.matrix]
    qinv = linalg.inverse(q)
    centre = [c / 2 for c in linalg.mat_vec(qinv, [Fraction(a) for a in k0])]
    r = tuple(round(c) for c in centre)
    pts = sublevel_points(g, k0, chi(g, k0, r))
    return min(chi(g, k0, x) for x in pts)


def cubes_on(points: Iterable[Point], n: int) -> list[tuple[Point, int]]:
    """All cubes (x, mask) whose corners all lie in ``points``, by dimension then x."""
    pts = set(points)
    valid: dict[Point, set[int]] = {x: {0} for x in pts}
    layers = [[(x, 0) for x in sorted(pts)]]
    for dim in range(1, n + 1):
        layer = []
        for x, mask in layers[-1]:
            top = mask.bit_length()  # add only bits above the current top
            for v in range(top, n):
                y = x[:v] + (x[v] + 1,) + x[v + 1:]
                vy = valid.get(y)
                if vy is not None and mask in vy:
                    layer.append((x, mask | (1 << v)))
        # a cube needs all its facets; the construction above checks the two
        # facets across the highest direction, the rest follow by induction
        for x, mask in layer:
            valid[x].add(mask)
        layer.sort()
        layers.append(layer)
        if not layer:
            break
    return [c for layer in layers for c in layer]


def corner_max(cubes: Sequence[tuple[Point, int]], f: Callable[[Point], int]) -> dict:
    out: dict = {}
    for x, mask in cubes:  # ordered by dimension
        if mask == 0:
            out[(x, 0)] = f(x)
            continue
        v = mask.bit_length() - 1
        rest = mask ^ (1 << v)
        y = x[:v] + (x[v] + 1,) + x[v + 1:]
        out[(x, mask)] = max(out[(x, rest)], out[(y, rest)])
    return out


def _faces(x: Point, mask: int):
    m = mask
    while m:
        low = m & -m
        v = low.bit_length() - 1
        m ^= low
        yield (x, mask ^ low)
        yield (x[:v] + (x[v] + 1,) + x[v + 1:], mask ^ low)


@dataclass
class LatticeComplex:
    graph: PlumbingGraph
    base: CharVector
    cubes: list[tuple[Point, int]]
    weight: dict
    complex: GradedFreeComplex
    floor: Fraction | None = None  # homology exact in degrees strictly above

    @property
    def base_grading(self) -> Fraction:
        return (char_square(self.graph, self.base) + len(self.graph)) / 4

    def generator(self, i: int) -> CubeGenerator:
        x, mask = self.cubes[i]
        k = tuple(a + 2 * b for a, b in zip(self.base, linalg.mat_vec(self.graph.matrix, x)))
        return CubeGenerator(k, frozenset(self.graph.vertices[j] for j in range(len(x)) if mask >> j & 1))

    def delta(self, i: int) -> int:
        return bin(self.cubes[i][1]).count("1")


def assemble(g: PlumbingGraph, k0: Sequence[int], cubes: list[tuple[Point, int]],
             floor: Fraction | None = None) -> LatticeComplex:
    k0 = tuple(k0)
    c = (char_square(g, k0) + len(g)) / 4
    w = corner_max(cubes, lambda x: chi(g, k0, x))
    pos = {cube: i for i, cube in enumerate(cubes)}
    grading, bd = {}, {}
    shared: dict[int, Fraction] = {}  # gradings repeat a lot; build each Fraction once
    for i, (x, mask) in enumerate(cubes):
        off = bin(mask).count("1") - 2 * w[(x, mask)]
        gr = shared.get(off)
        if gr is None:
            gr = shared[off] = c + off
        grading[i] = gr
        s: set = set()
        for face in _faces(x, mask):
            j = pos[face]
            s ^= {j}
        bd[i] = s
    cx = GradedFreeComplex(list(range(len(cubes))), grading, bd)
    return LatticeComplex(g, k0, cubes, w, cx, floor)


def _box_points(n: int, radius: int) -> list[Point]:
    from itertools import product
    return list(product(range(-radius, radius + 1), repeat=n))


def build_complex(g: PlumbingGraph, s: SpincClass, box: TruncationBox | WeightTruncation) -> LatticeComplex:
    g.require_definite()
    k0 = s.representative
    if isinstance(box, TruncationBox):
        pts = _box_points(len(g), box.radius)
        floor = None
    else:
        m = min_chi(g, k0)
        pts = sublevel_points(g, k0, m + box.level)
        c = (char_square(g, k0) + len(g)) / 4
        floor = c + len(g) - 1 - 2 * (m + box.level)
    return assemble(g, k0, cubes_on(pts, len(g)), floor)


# --- homology --------------------------------------------------------------

def certified(lc: LatticeComplex, track: bool = False) -> TruncatedHomology | None:
    return truncated_homology(lc.complex, lc.floor, track=track)


@dataclass
class LatticeHomology:
    spinc: SpincClass
    module: GradedModule
    by_delta: dict[int, GradedModule]
    level: int
    floor: Fraction
    history: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "spinc": self.spinc.to_dict(),
            "module": self.module.to_dict(),
            "delta": {str(d): m.to_dict() for d, m in sorted(self.by_delta.items())},
            "level": self.level,
        }


def default_start_level(g: PlumbingGraph) -> int:
    return (len(g) + 1) // 2


@lru_cache(maxsize=256)
def lattice_homology(g: PlumbingGraph, s: SpincClass, start: int | None = None,
                     max_level: int | None = None, confirm: bool = True) -> LatticeHomology:
    """Lattice homology of one class, increasing the truncation level until certified.

    A single level only sees summands strictly above its floor, so a torsion
    summand sitting at the floor would go unnoticed.  With ``confirm`` the
    next level must reproduce the same module, which rules that out.
    """
    g.require_definite()
    level = default_start_level(g) if start is None else start
    cap = (level + 12 + 2 * len(g)) if max_level is None else max_level
    history = []
    previous = None
    while level <= cap:
        lc = build_complex(g, s, WeightTruncation(level))
        th = certified(lc)
        mod = th.module if th is not None else None
        history.append({"level": level, "floor": lc.floor, "module": mod, "size": len(lc.cubes)})
        if th is not None and (not confirm or previous == mod):
            by_delta: dict[int, list] = {}
            for gr_, t, v in th.summands:
                by_delta.setdefault(lc.delta(v), []).append((gr_, t))
            split = {d: GradedModule.make([h for h, t in v if t is None], [(h, t) for h, t in v if t is not None])
                     for d, v in by_delta.items()}
            return LatticeHomology(s, mod, split, level, lc.floor, history)
        previous = mod
        level += 1
    raise TruncationError(f"lattice homology did not certify by level {cap}", history)


def lattice_homology_all(g: PlumbingGraph, **kw) -> list[LatticeHomology]:
    return [lattice_homology(g, s, **kw) for s in spinc_classes(g)]


def delta_split(g: PlumbingGraph, s: SpincClass) -> dict[int, GradedModule]:
    return dict(lattice_homology(g, s).by_delta)


@dataclass
class DInvariant:
    value: Fraction
    representative: CharVector | None


def d_invariant(g: PlumbingGraph, s: SpincClass) -> DInvariant:
    lh = lattice_homology(g, s)
    if len(lh.module.free) != 1:
        raise StructureError("expected exactly one free summand")
    d = lh.module.free[0]
    k0 = s.representative
    c = (char_square(g, k0) + len(g)) / 4
    rep = None
    # a 0-cube of grading d is a point with chi = (c - d) / 2
    target = (c - d) / 2
    if target.denominator == 1:
        m = min_chi(g, k0)
        if target >= m:
            for x in sublevel_points(g, k0, int(target)):
                if chi(g, k0, x) == target:
                    rep = tuple(a + 2 * b for a, b in zip(k0, linalg.mat_vec(g.matrix, x)))
                    break
    return DInvariant(d, rep)


def max_zero_cube_grading(g: PlumbingGraph, s: SpincClass) -> Fraction:
    """max over the class of (K^2 + |V|)/4, the independent route to d for rational graphs."""
    return (s.square + len(g)) / 4


def is_lspace(g: PlumbingGraph) -> bool:
    return all(not lh.module.torsion for lh in lattice_homology_all(g))


def spinc_of(g: PlumbingGraph, k: Sequence[int]) -> SpincClass:
    return class_of(g, k)
