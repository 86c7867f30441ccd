"""Surgery mapping cones for G_{-k}(v0), checked against direct lattice homology.

Blocks are indexed by n in Z: block n carries the class s_n = s twisted n
times by v0 and the level i_n = i + n * alpha with alpha = Sigma^2 < 0.
The A-row block A_{i_n}(s_n) maps to B(s_n) by v and to B(s_{n+1}) by h.
In G_{-k}(v0) the B-block generator sits at

    d(G, s_n) + lambda_n^2 / (4 Sigma^2) + 1/4,    lambda_n = 2 i_n - Sigma^2.

Blocks with i_n above every Alexander level cancel against B(s_n); blocks
below every level cancel against B(s_{n+1}).  What is left is finite.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .fu import (GradedFreeComplex, GradedModule, StructureError, homology,
                 is_boundary, tower_cocycle, truncated_homology)
from .graph import MarkedGraph, PlumbingGraph, fraction_str, mark_vertex, with_framing
from .knot import (StaircaseData, clean_model, hypothesis_holds, sigma_class,
                   staircase_data)
from .lattice import lattice_homology
from .rational import is_rational
from .spinc import SpincClass, class_of, spinc_classes, twist


class ConeError(RuntimeError):
    pass


@dataclass(frozen=True)
class ConeBlock:
    n: int
    s: SpincClass
    level: Fraction
    shift: Fraction  # grading offset of B(s_n) inside the cone

    def to_dict(self) -> dict:
        return {"n": self.n, "spinc": self.s.index, "level": fraction_str(self.level),
                "shift": fraction_str(self.shift)}


@dataclass(frozen=True)
class BlockFamily:
    marked: MarkedGraph
    k: int
    t: SpincClass
    i0: Fraction
    alpha: Fraction
    s0: SpincClass

    def block(self, n: int) -> ConeBlock:
        level = self.i0 + n * self.alpha
        lam = 2 * level - self.alpha
        return ConeBlock(n, twist(self.s0, self.marked, n), level, lam * lam / (4 * self.alpha) + Fraction(1, 4))


def _restrict(marked: MarkedGraph, big: PlumbingGraph, vec: Sequence[int]) -> tuple[tuple[int, ...], int]:
    vals = dict(zip(big.vertices, vec))
    return tuple(vals[v] for v in marked.graph.vertices), vals[marked.v0]


def block_levels(marked: MarkedGraph, k: int, t: SpincClass, span: int = 8) -> BlockFamily:
    """Read the blocks off the class t on G_{-k}(v0) and check the arithmetic progression."""
    big = with_framing(marked, -k)
    if t.graph != big:
        raise ConeError("class does not live on G_{-k}(v0)")
    sig = sigma_class(marked)
    alpha = sig.square(k)
    g = marked.graph
    base = list(t.representative)
    iv0 = big.index[marked.v0]
    row = big.matrix[iv0]
    levels, classes = [], []
    for n in range(-span, span + 1):
        vec = [x + 2 * n * r for x, r in zip(base, row)]  # L + 2n v0*
        kk, lv0 = _restrict(marked, big, vec)
        lam = lv0 + sig.pair(kk)
        levels.append((lam + alpha) / 2)
        classes.append(class_of(g, kk))
    i0 = levels[span]
    for j, n in enumerate(range(-span, span + 1)):
        if levels[j] != i0 + n * alpha:
            raise StructureError("block levels are not an arithmetic progression")
        if classes[j] != twist(classes[span], marked, n):
            raise StructureError("block classes do not follow the v0 twist")
    return BlockFamily(marked, k, t, i0, alpha, classes[span])


def window(fam: BlockFamily, top: Fraction, bottom: Fraction) -> tuple[int, int]:
    """A-blocks n_lo..n_hi with bottom < i_n < top survive; B-blocks n_lo..n_hi+1."""
    a = fam.alpha  # negative
    n = 0
    while fam.i0 + n * a < top:
        n -= 1
    while fam.i0 + n * a >= top:
        n += 1
    n_lo = n
    n = n_lo
    while fam.i0 + (n + 1) * a > bottom:
        n += 1
    n_hi = n if fam.i0 + n * a > bottom else n - 1
    return n_lo, n_hi


# --- homology-level cone ------------------------------------------------------

@dataclass
class ConeResult:
    module: GradedModule
    complex: GradedFreeComplex
    window: tuple[int, int]
    blocks: list[ConeBlock]
    kind: str
    b_row: set = field(default_factory=set)

    def tower_in_b_row(self) -> bool:
        """Some B-row generator at the tower degree is not a boundary."""
        if len(self.module.free) != 1:
            return False
        d = self.module.free[0]
        for b in sorted(self.b_row, key=repr):
            if self.complex.grading[b] == d and not is_boundary(self.complex, {b}, d):
                return True
        return False


def _tails(data: list[StaircaseData]) -> tuple[Fraction, Fraction]:
    top = max(sd.window()[1] for sd in data)
    bottom = min(sd.window()[0] for sd in data)
    return top, bottom


def cone_homology(marked: MarkedGraph, k: int, t: SpincClass, kind: str = "auto") -> ConeResult:
    if kind == "auto":
        kind = "homology" if hypothesis_holds(marked) else "chain"
    fam = block_levels(marked, k, t)
    if kind == "homology":
        return _homology_cone(fam)
    if kind == "chain":
        return _chain_cone(fam)
    raise ValueError(f"unknown cone kind {kind!r}")


def _homology_cone(fam: BlockFamily) -> ConeResult:
    marked = fam.marked
    if not hypothesis_holds(marked):
        raise ConeError("homology-level cone needs a connected rational G")
    data = {s: staircase_data(marked, s) for s in spinc_classes(marked.graph)}
    top, bottom = _tails(list(data.values()))
    # the tails are a = 0 at or above the window top and b = 0 at or below its bottom
    n_lo, n_hi = window(fam, top + 1, bottom - 1)
    gens, gr, bd = [], {}, {}
    blocks = [fam.block(n) for n in range(n_lo, n_hi + 2)]
    for blk in blocks:
        key = ("B", blk.n)
        gens.append(key)
        gr[key] = data[blk.s].q + blk.shift
        bd[key] = set()
    for blk in blocks[:-1]:
        a, b, _ = data[blk.s].at(blk.level)
        key = ("A", blk.n)
        gens.append(key)
        g1 = gr[("B", blk.n)] - 2 * a + 1
        g2 = gr[("B", blk.n + 1)] - 2 * b + 1
        if g1 != g2:
            raise StructureError(f"block {blk.n}: v and h disagree on the grading ({g1} vs {g2})")
        gr[key] = g1
        bd[key] = {("B", blk.n), ("B", blk.n + 1)}
    cx = GradedFreeComplex(gens, gr, bd)
    cx.check()
    return ConeResult(homology(cx), cx, (n_lo, n_hi), blocks, "homology",
                      {x for x in gens if x[0] == "B"})


# --- chain-level cone -------------------------------------------------------------

def _chain_cone(fam: BlockFamily) -> ConeResult:
    """A-blocks as reduced knot complexes, B-blocks replaced by their towers."""
    marked = fam.marked
    models = {s: clean_model(marked, s) for s in spinc_classes(marked.graph)}
    tops, bottoms = [], []
    for kl in models.values():
        alex = kl.reduced.alexander.values()
        tops.append(max(alex))
        bottoms.append(min(alex))
    n_lo, n_hi = window(fam, max(tops), min(bottoms))
    blocks = [fam.block(n) for n in range(n_lo, n_hi + 2)]
    towers = {}
    for s, kl in models.items():
        th = truncated_homology(kl.complex_b(), kl.floor_b(), track=True)
        if th is None:
            raise ConeError("B block did not certify")
        towers[s] = th
    gens, gr, bd = [], {}, {}
    for blk in blocks:
        key = ("B", blk.n)
        gens.append(key)
        gr[key] = towers[blk.s].tower + blk.shift
        bd[key] = set()
    for blk in blocks[:-1]:
        kl = models[blk.s]
        ca = kl.complex_a(blk.level)
        phi_b = tower_cocycle(kl.complex_b(), towers[blk.s].tower, towers[blk.s].cycle)
        cc = kl.complex_c(blk.level)
        hc = truncated_homology(cc, kl.floor_c(blk.level), track=True)
        if hc is None:
            raise ConeError("C block did not certify")
        phi_c = tower_cocycle(cc, hc.tower, hc.cycle)
        for x in ca.gens:
            key = ("A", blk.n, x)
            gens.append(key)
            gr[key] = ca.grading[x] + blk.shift + 1
            out = {("A", blk.n, y) for y in ca.boundary[x]}
            if x in phi_b:
                out.add(("B", blk.n))
            if x in phi_c:
                out.add(("B", blk.n + 1))
            bd[key] = out
    cx = GradedFreeComplex(gens, gr, bd)
    cx.check()
    return ConeResult(homology(cx), cx, (n_lo, n_hi), blocks, "chain",
                      {x for x in gens if x[0] == "B"})


# --- checks against direct computation ----------------------------------------------

@dataclass
class SurgeryCheck:
    t: SpincClass
    cone: ConeResult
    direct: GradedModule

    @property
    def equal(self) -> bool:
        return self.cone.module == self.direct

    def to_dict(self, fam: BlockFamily | None = None) -> dict:
        out = {
            "spinc": self.t.to_dict(),
            "cone": self.cone.module.to_dict(),
            "direct": self.direct.to_dict(),
            "equal": self.equal,
            "kind": self.cone.kind,
            "window": list(self.cone.window),
            "b_row": self.cone.tower_in_b_row(),
        }
        if fam is not None:
            out["i"] = fraction_str(fam.i0)
            out["alpha"] = fraction_str(fam.alpha)
        return out


def verify_surgery(marked: MarkedGraph, k: int, kind: str = "auto") -> list[SurgeryCheck]:
    big = with_framing(marked, -k)
    out = []
    for t in spinc_classes(big):
        cone = cone_homology(marked, k, t, kind)
        out.append(SurgeryCheck(t, cone, lattice_homology(big, t).module))
    return out


def hf_via_cone(g: PlumbingGraph, w: str, kind: str = "auto") -> list[SurgeryCheck]:
    """HF^- of Y_G from the cone over G - w, compared with direct lattice homology."""
    g.require_definite()
    marked, m = mark_vertex(g, w)
    rest = marked.graph
    for comp in rest.components():
        if not is_rational(rest.subgraph(comp), "laufer").rational:
            raise ConeError(f"component {list(comp)} of G - w is not rational")
    return verify_surgery(marked, -m, kind)


def contracted_min(marked: MarkedGraph, s: SpincClass, i) -> tuple[int, int]:
    """min(a_i, b_i) read from direct lattice homology of G_{-k}(v0), k so large
    that block (s, i) is the only one left after contraction.

    Returns (value from the surgered graph, value from the staircase).
    """
    data = staircase_data(marked, s)
    a, b, _ = data.at(i)
    all_data = [staircase_data(marked, x) for x in spinc_classes(marked.graph)]
    top, bottom = _tails(all_data)
    i = Fraction(i)
    sig = sigma_class(marked)
    need = max(top - i, i - bottom) + 2
    k = int(sig.an + need) + 1
    from .knot import extension
    ll = extension(marked, k, s.representative, i)
    big = with_framing(marked, -k)
    t = class_of(big, ll)
    fam = block_levels(marked, k, t)
    n = (i - fam.i0) / fam.alpha
    if n.denominator != 1 or fam.block(int(n)).s != s:
        raise ConeError("extension does not land on block (s, i)")
    # every other block cancels: those above against B(s_n), those below against B(s_{n+1})
    if not (i - fam.alpha >= top and i + fam.alpha <= bottom):
        raise ConeError("block (s, i) is not isolated")
    mod = lattice_homology(big, t).module
    if len(mod.torsion) > 1 or len(mod.free) != 1:
        raise StructureError(f"unexpected homology {mod.to_dict()}")
    got = mod.torsion[0][1] if mod.torsion else 0
    return got, min(a, b)
