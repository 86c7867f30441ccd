"""The Alexander filtration induced by a marked vertex, and staircase data.

For a class s on G with base vector K0 and adjacency vector n of v0, write
chi for the point weight of s and chi' = chi - n.x for the weight of the
class twisted once by v0.  With cube weights w, w' (corner maxima)

    A = kappa + w' - w,    kappa = a.(K0 + n) / 2,    a = -M^{-1} n.

On zero-cubes this is A(K) = (K(Sigma - v0) + (Sigma - v0).v0) / 2.
The sub-complexes A_i, B, C_i are then lattice-type complexes on the same
cubes, with gradings shifted by U-powers:

    B:    gr
    A_i:  gr - 2 max(0, A - i)
    C_i:  gr - 2 (A - i)
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from . import linalg
from .fu import (BifilteredComplex, GradedFreeComplex, GradedModule, StructureError, minimal_model, TruncatedHomology,
                 TruncationError, pushes_nonzero, truncated_homology)
from .graph import MarkedGraph, with_framing
from .lattice import (assemble, chi, corner_max, cubes_on, d_invariant, g_weight, min_chi,
                      sublevel_points)
from .rational import is_rational
from .spinc import SpincClass, char_square, same_class, spinc_classes, twist


class KnotError(RuntimeError):
    pass


@dataclass(frozen=True)
class SigmaClass:
    """Sigma = v0 + sum a_j v_j, orthogonal to every vertex of G."""

    marked: MarkedGraph
    a: tuple[Fraction, ...]

    @property
    def n(self) -> tuple[int, ...]:
        return self.marked.adjacency

    @property
    def an(self) -> Fraction:
        """(Sigma - v0).v0 = sum a_j n_j, positive for definite G."""
        return sum((x * y for x, y in zip(self.a, self.n)), Fraction(0))

    def pair(self, k: Sequence[int]) -> Fraction:
        """K(Sigma - v0)."""
        return sum((x * y for x, y in zip(self.a, k)), Fraction(0))

    def square(self, k: int) -> Fraction:
        """Sigma^2 when v0 carries framing -k."""
        return -k + self.an

    def to_dict(self) -> dict:
        from .graph import fraction_str
        return {"a": [fraction_str(x) for x in self.a], "n": list(self.n)}


def sigma_class(marked: MarkedGraph) -> SigmaClass:
    g = marked.graph
    g.require_definite()
    a = linalg.mat_vec(g.inverse, [Fraction(-x) for x in marked.adjacency])
    return SigmaClass(marked, tuple(a))


def min_definite_k(marked: MarkedGraph) -> int:
    """Smallest k >= 1 with G_{-k}(v0) negative definite (Sigma^2 < 0)."""
    an = sigma_class(marked).an
    return max(1, math.floor(an) + 1)


def alexander_zero(sig: SigmaClass, k: Sequence[int]) -> Fraction:
    return (sig.pair(k) + sig.an) / 2


def alexander_grading(marked: MarkedGraph, s: SpincClass, k: Sequence[int], e) -> Fraction:
    if not same_class(marked.graph, k, s.representative):
        raise KnotError("vector is not in the given class")
    sig = sigma_class(marked)
    g = marked.graph
    kt = tuple(x + 2 * y for x, y in zip(k, marked.adjacency))
    return alexander_zero(sig, k) + g_weight(g, k, e) - g_weight(g, kt, e)


# --- the knot lattice on a finite truncation ---------------------------------

class KnotLattice:
    """Cubes of one class on the union of two weight sublevel sets."""

    def __init__(self, marked: MarkedGraph, s: SpincClass, level: int):
        g = marked.graph
        g.require_definite()
        self.marked, self.s, self.level = marked, s, level
        self.sigma = sigma_class(marked)
        k0 = s.representative
        kt = tuple(x + 2 * y for x, y in zip(k0, marked.adjacency))
        self.k0, self.kt = k0, kt
        self.m, self.mt = min_chi(g, k0), min_chi(g, kt)
        pts = set(sublevel_points(g, k0, self.m + level)) | set(sublevel_points(g, kt, self.mt + level))
        cubes = cubes_on(pts, len(g))
        self.lattice = assemble(g, k0, cubes)
        self.wt = corner_max(cubes, lambda x: chi(g, kt, x))
        self.kappa = alexander_zero(self.sigma, k0)
        lc = self.lattice
        self.alexander = {i: self.kappa + self.wt[c] - lc.weight[c] for i, c in enumerate(cubes)}
        self.c = lc.base_grading
        self.ct = (char_square(g, kt) + len(g)) / 4
        self.nv = len(g)

    @property
    def residue(self) -> Fraction:
        return self.kappa - math.floor(self.kappa)

    # trusted floors: every cube left out has weight above the sublevel bound
    def floor_b(self) -> Fraction:
        return self.c + self.nv + 1 - 2 * (self.m + self.level + 1)

    def floor_a(self, i) -> Fraction:
        mu = max(self.m + self.level + 1, self.mt + self.level + 1 + self.kappa - i)
        return self.c + self.nv + 1 - 2 * mu

    def floor_c(self, i) -> Fraction:
        return self.c - 2 * self.kappa + 2 * i + self.nv + 1 - 2 * (self.mt + self.level + 1)

    @cached_property
    def reduced(self) -> BifilteredComplex:
        """Filtered minimal model of the truncation.

        Each cancelled pair has equal Alexander level, so it cancels in every
        A_i, B and C_i alike; all of them are computed from this model.
        """
        return minimal_model(self.bifiltered())

    def _shifted(self, power) -> GradedFreeComplex:
        base = self.reduced.complex
        gr = {x: base.grading[x] - 2 * power(x) for x in base.gens}
        return GradedFreeComplex(base.gens, gr, base.boundary)

    def complex_b(self) -> GradedFreeComplex:
        return self.reduced.complex

    def complex_a(self, i) -> GradedFreeComplex:
        i = Fraction(i)
        alex = self.reduced.alexander
        return self._shifted(lambda x: max(Fraction(0), alex[x] - i))

    def complex_c(self, i) -> GradedFreeComplex:
        i = Fraction(i)
        alex = self.reduced.alexander
        return self._shifted(lambda x: alex[x] - i)

    def bifiltered(self) -> BifilteredComplex:
        return BifilteredComplex(self.lattice.complex, self.alexander)

    def check_residue(self, i) -> None:
        if (Fraction(i) - self.kappa).denominator != 1:
            raise KnotError(f"level {i} is not congruent to {self.residue} mod 1")


def build_bifiltered(marked: MarkedGraph, s: SpincClass, level: int | None = None) -> BifilteredComplex:
    lvl = (len(marked.graph) + 1) // 2 + 1 if level is None else level
    b = KnotLattice(marked, s, lvl).bifiltered()
    b.check()
    return b


def sub_complex(kl: KnotLattice, kind: str, i=None) -> GradedFreeComplex:
    if kind == "B":
        return kl.complex_b()
    kl.check_residue(i)
    if kind == "A":
        return kl.complex_a(i)
    if kind == "C":
        return kl.complex_c(i)
    raise ValueError(f"unknown sub-complex kind {kind!r}")


# --- staircase data ----------------------------------------------------------

@dataclass
class StaircaseLevel:
    i: Fraction
    a: int
    b: int
    d: int | None
    module: GradedModule  # H(A_i)

    def to_dict(self) -> dict:
        from .graph import fraction_str
        out = {"i": fraction_str(self.i), "a": self.a, "b": self.b, "d": self.d}
        if not self.module.is_tower:
            out["homology"] = self.module.to_dict()
        return out


@dataclass
class StaircaseData:
    s: SpincClass
    i_s: Fraction
    q: Fraction
    q_twisted: Fraction
    levels: list[StaircaseLevel]
    jumps: list[Fraction]
    violations: list[str] = field(default_factory=list)
    hypothesis: bool = True
    checks: dict = field(default_factory=dict)

    @property
    def symmetric(self) -> bool:
        return sorted(self.jumps) == sorted(-g for g in self.jumps)

    @property
    def lspace_type(self) -> bool:
        return all(lv.module.is_tower for lv in self.levels)

    def at(self, i) -> tuple[int, int, int]:
        """(a_i, b_i, d_i), extended past the window by the certified tails."""
        i = Fraction(i)
        lo, hi = self.levels[0], self.levels[-1]
        if i > hi.i:
            return 0, hi.b + int(i - hi.i), 0
        if i < lo.i:
            return lo.a + int(lo.i - i), 0, 1
        lv = self.levels[int(i - lo.i)]
        return lv.a, lv.b, lv.d

    def window(self) -> tuple[Fraction, Fraction]:
        return self.levels[0].i, self.levels[-1].i

    def to_dict(self) -> dict:
        from .graph import fraction_str
        return {
            "spinc": None if self.s is None else self.s.to_dict(),
            "i_s": fraction_str(self.i_s),
            "q": fraction_str(self.q),
            "levels": [lv.to_dict() for lv in self.levels],
            "jumps": [fraction_str(g) for g in self.jumps],
            "symmetric": self.symmetric,
            "lspace_type": self.lspace_type,
            "violations": list(self.violations),
        }


def hypothesis_holds(marked: MarkedGraph) -> bool:
    """Connected rational G, i.e. v0 a leaf over a rational tree."""
    g = marked.graph
    return len(g.components()) == 1 and is_rational(g, "laufer").rational


def _certify(cx, floor, track=True) -> TruncatedHomology | None:
    return truncated_homology(cx, floor, track=track)


class _Insufficient(Exception):
    pass


def _levels(kl: KnotLattice, lo: Fraction, hi: Fraction, cache: dict):
    """Certified homology of A_i and C_i for lo <= i <= hi + 1 (cached by i)."""
    i = lo
    while i <= hi + 1:
        if i not in cache:
            ha = _certify(kl.complex_a(i), kl.floor_a(i))
            hc = _certify(kl.complex_c(i), kl.floor_c(i), track=False)
            if ha is None or hc is None:
                raise _Insufficient(f"level {i}")
            cache[i] = (ha, hc)
        i += 1


@lru_cache(maxsize=128)
def staircase_data(marked: MarkedGraph, s: SpincClass, start_level: int | None = None,
                   max_level: int | None = None, push_checks: bool = True) -> StaircaseData:
    """Staircase sequences of one class over a window widened until both tails certify."""
    g = marked.graph
    hyp = hypothesis_holds(marked)
    level = (len(g) + 1) // 2 + 1 if start_level is None else start_level
    cap = level + 8 if max_level is None else max_level
    previous = None
    while level <= cap:
        try:
            cur = _staircase_at(marked, s, level, hyp, push_checks)
        except _Insufficient:
            cur = None
        # the next level must agree, otherwise something sat on a floor
        if cur is not None and previous is not None and cur.to_dict() == previous.to_dict():
            return cur
        previous = cur
        level += 1
    raise TruncationError(f"staircase did not certify by level {cap}")


@lru_cache(maxsize=64)
def knot_lattice(marked: MarkedGraph, s: SpincClass, level: int) -> KnotLattice:
    return KnotLattice(marked, s, level)


def clean_model(marked: MarkedGraph, s: SpincClass, start_level: int | None = None,
                max_level: int | None = None) -> KnotLattice:
    """A truncation whose reduced model has every generator above the trusted floor of B."""
    level = (len(marked.graph) + 1) // 2 + 1 if start_level is None else start_level
    cap = level + 8 if max_level is None else max_level
    while level <= cap:
        kl = knot_lattice(marked, s, level)
        fb = kl.floor_b()
        if all(kl.reduced.complex.grading[x] > fb for x in kl.reduced.gens):
            return kl
        level += 1
    raise TruncationError(f"reduced knot complex still touches the floor at level {cap}")


def _staircase_at(marked, s, level, hyp, push_checks) -> StaircaseData:
    kl = knot_lattice(marked, s, level)
    hb = _certify(kl.complex_b(), kl.floor_b(), track=False)
    if hb is None:
        raise _Insufficient("B")
    q = hb.tower
    r = kl.residue
    lo, hi = r - 2, r + 2
    cache: dict = {}
    for _ in range(12):
        _levels(kl, lo, hi, cache)
        a_hi = (q - cache[hi][0].tower) / 2
        b_lo = (cache[lo][1].tower - cache[lo][0].tower) / 2
        if a_hi == 0 and b_lo == 0:
            break
        if a_hi != 0:
            hi += 2
        if b_lo != 0:
            lo -= 2
    else:
        raise TruncationError("staircase window did not close")

    levels, violations = [], []
    i = lo
    while i <= hi:
        ha, hc = cache[i]
        ha1, _ = cache[i + 1]
        a = (q - ha.tower) / 2
        b = (hc.tower - ha.tower) / 2
        d = (ha1.tower - ha.tower) / 2
        for name, v in (("a", a), ("b", b), ("d", d)):
            if v.denominator != 1 or v < 0:
                raise StructureError(f"{name}_{i} = {v} is not a nonnegative integer")
        if not ha.module.is_tower:
            violations.append(f"H(A_{i}) = {ha.module.to_dict()} is not F[U]")
        if not hc.module.is_tower:
            violations.append(f"H(C_{i}) is not F[U]")
        if d not in (0, 1):
            violations.append(f"d_{i} = {d} not in {{0,1}}")
        levels.append(StaircaseLevel(i, int(a), int(b), int(d), ha.module))
        i += 1
    if not hb.module.is_tower:
        violations.append("H(B) is not F[U]")
    # a and b must step as d_i dictates
    for cur, nxt in zip(levels, levels[1:]):
        if cur.d == 0 and not (cur.a == nxt.a and cur.b == nxt.b - 1):
            violations.append(f"d_{cur.i} = 0 recursion fails")
        if cur.d == 1 and not (cur.a == nxt.a + 1 and cur.b == nxt.b):
            violations.append(f"d_{cur.i} = 1 recursion fails")
    if levels[-1].a != 0 or levels[0].b != 0:
        violations.append("tails do not vanish")

    checks = {}
    if push_checks:
        checks = _push_checks(kl, cache, lo, hi)
        bad = [k for k, v in checks.items() if v is False]
        violations.extend(f"induced map {k} vanishes" for k in bad)
        if any(v is None for v in checks.values()):
            raise _Insufficient("push margin")

    # jumps: gamma with d_gamma != d_{gamma-1}; outside the window d is 0 above and 1 below
    ds = {lv.i: lv.d for lv in levels}
    jumps = []
    gamma = lo + 1
    while gamma <= hi:
        if ds[gamma] != ds[gamma - 1]:
            jumps.append(gamma)
        gamma += 1
    if ds[lo] != 1:
        jumps.append(lo)  # the lower tail has d = 1, so lo itself is a jump
    if ds[hi] != 0:
        violations.append("top of window has d = 1")
    jumps.sort(reverse=True)

    q_tw = d_invariant(marked.graph, twist(s, marked, 1)).value
    out = StaircaseData(s, r, q, q_tw, levels, jumps, violations, hyp, checks)
    return out


def _push_checks(kl: KnotLattice, cache, lo, hi) -> dict:
    """Push each tower cycle of A_i through v, h and psi; True means nonzero on homology."""
    out = {}
    cb = kl.complex_b()
    fb = kl.floor_b()
    i = lo
    while i <= hi:
        ha, _ = cache[i]
        out[f"v_{i}"] = pushes_nonzero(ha.cycle, ha.tower, cb, fb)
        out[f"h_{i}"] = pushes_nonzero(ha.cycle, ha.tower, kl.complex_c(i), kl.floor_c(i))
        out[f"psi_{i}"] = pushes_nonzero(ha.cycle, ha.tower, kl.complex_a(i + 1), kl.floor_a(i + 1))
        i += 1
    return out


def staircase_all(marked: MarkedGraph, **kw) -> list[StaircaseData]:
    return [staircase_data(marked, s, **kw) for s in spinc_classes(marked.graph)]


# --- cross-checks --------------------------------------------------------------

def extension(marked: MarkedGraph, k: int, kvec: Sequence[int], i) -> tuple[int, ...]:
    """L on G_{-k}(v0): L = K on G and L(v0) = 2i - Sigma^2 - K(Sigma - v0)."""
    sig = sigma_class(marked)
    lv0 = 2 * Fraction(i) - sig.square(k) - sig.pair(kvec)
    if lv0.denominator != 1:
        raise KnotError(f"level {i} gives a non-integral value on v0")
    big = with_framing(marked, -k)
    vals = dict(zip(marked.graph.vertices, kvec))
    vals[marked.v0] = int(lv0)
    return tuple(vals[v] for v in big.vertices)


def predicted_ab_difference(marked: MarkedGraph, s: SpincClass, i, k: int | None = None) -> Fraction:
    """(d(s) - d(s_v0))/2 + ((L^2 - K^2) - (L'^2 - K'^2))/8 with L, L' at levels i and i + Sigma^2."""
    g = marked.graph
    k = min_definite_k(marked) if k is None else k
    big = with_framing(marked, -k)
    sig = sigma_class(marked)
    s1 = twist(s, marked, 1)
    d0, d1 = d_invariant(g, s), d_invariant(g, s1)
    if d0.representative is None or d1.representative is None:
        raise KnotError("no zero-cube representative of the d-invariant")
    kk, kk1 = d0.representative, d1.representative
    alpha = sig.square(k)
    ll = extension(marked, k, kk, i)
    ll1 = extension(marked, k, kk1, Fraction(i) + alpha)
    diff = (char_square(big, ll) - char_square(g, kk)) - (char_square(big, ll1) - char_square(g, kk1))
    return (d0.value - d1.value) / 2 + diff / 8
