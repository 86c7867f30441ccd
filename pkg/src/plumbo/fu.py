"""Graded and bifiltered free chain complexes over F2[U].

Every complex here is Maslov graded and every differential is homogeneous,
so a boundary entry x -> y is a single monomial U^t whose exponent is forced
by the gradings: gr(x) - 1 = gr(y) - 2t.  Complexes therefore store only the
support of the differential; exponents are recomputed on demand.
"""
from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence


class GradingError(ValueError):
    """A boundary entry is incompatible with the gradings or filtrations."""


class StructureError(AssertionError):
    """A homology computation violated an expected structural property."""


class UPoly:
    """Polynomial in U over F2, stored as a bitset (bit t <-> U^t)."""

    __slots__ = ("bits",)

    def __init__(self, bits: int = 0):
        self.bits = bits

    @classmethod
    def monomial(cls, t: int) -> "UPoly":
        return cls(1 << t)

    @classmethod
    def from_exponents(cls, exps: Iterable[int]) -> "UPoly":
        b = 0
        for t in exps:
            b ^= 1 << t
        return cls(b)

    def exponents(self) -> list[int]:
        return [t for t in range(self.bits.bit_length()) if self.bits >> t & 1]

    @property
    def degree(self) -> int:
        return self.bits.bit_length() - 1

    @property
    def valuation(self) -> int:
        return (self.bits & -self.bits).bit_length() - 1

    def __bool__(self):
        return self.bits != 0

    def __eq__(self, other):
        return isinstance(other, UPoly) and self.bits == other.bits

    def __hash__(self):
        return hash(self.bits)

    def __add__(self, other: "UPoly") -> "UPoly":
        return UPoly(self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other: "UPoly") -> "UPoly":
        a, b, out = self.bits, other.bits, 0
        while b:
            if b & 1:
                out ^= a
            a <<= 1
            b >>= 1
        return UPoly(out)

    def __divmod__(self, other: "UPoly") -> tuple["UPoly", "UPoly"]:
        if not other:
            raise ZeroDivisionError
        q, r, d = 0, self.bits, other.degree
        while r and r.bit_length() - 1 >= d:
            s = r.bit_length() - 1 - d
            q ^= 1 << s
            r ^= other.bits << s
        return UPoly(q), UPoly(r)

    def gcd(self, other: "UPoly") -> "UPoly":
        a, b = self, other
        while b:
            a, b = b, divmod(a, b)[1]
        return a

    def __repr__(self):
        if not self.bits:
            return "0"
        return " + ".join("1" if t == 0 else ("U" if t == 1 else f"U^{t}") for t in self.exponents())


def _exponent(gr_x: Fraction, gr_y: Fraction) -> int:
    t2 = gr_y - gr_x + 1
    if t2.denominator != 1 or t2.numerator % 2 or t2 < 0:
        raise GradingError(f"no monomial U^t takes grading {gr_x} - 1 to {gr_y}")
    return t2.numerator // 2


@dataclass
class GradedFreeComplex:
    """Free F2[U]-complex with rational Maslov gradings.

    ``boundary[x]`` is the set of generators y such that the coefficient of
    y in dx is nonzero (that coefficient is then U^t, t fixed by gradings).
    """

    gens: list[Hashable]
    grading: dict[Hashable, Fraction]
    boundary: dict[Hashable, set]

    def __post_init__(self):
        gr = self.grading
        self.grading = {x: g if type(g) is Fraction else Fraction(g) for x in self.gens for g in (gr[x],)}
        self.boundary = {x: set(self.boundary.get(x, ())) for x in self.gens}

    @classmethod
    def from_entries(cls, gens: Sequence, grading: Mapping, entries: Iterable[tuple]) -> "GradedFreeComplex":
        """Build from (x, t, y) triples meaning dx contains U^t y; exponents are checked."""
        bd: dict = {x: set() for x in gens}
        for x, t, y in entries:
            if _exponent(Fraction(grading[x]), Fraction(grading[y])) != t:
                raise GradingError(f"entry {x} -> U^{t} {y} breaks the grading law")
            bd[x] ^= {y}
        return cls(list(gens), dict(grading), bd)

    def __len__(self):
        return len(self.gens)

    def exponent(self, x, y) -> int:
        return _exponent(self.grading[x], self.grading[y])

    def check(self) -> None:
        """Assert the grading law on every entry and d^2 = 0."""
        den = math.lcm(*(g.denominator for g in self.grading.values())) if self.gens else 1
        scaled = {x: g.numerator * (den // g.denominator) for x, g in self.grading.items()}
        for x in self.gens:
            gx = scaled[x] - den
            for y in self.boundary[x]:
                t2 = scaled[y] - gx
                if t2 < 0 or t2 % (2 * den):
                    self.exponent(x, y)  # raises with the readable message
        for x in self.gens:
            acc: set = set()
            for y in self.boundary[x]:
                acc ^= self.boundary[y]
            if acc:
                raise StructureError(f"d^2 != 0 at {x!r}")

    def to_json(self) -> str:
        order = {x: i for i, x in enumerate(self.gens)}
        return json.dumps({
            "generators": [{"id": repr(x), "maslov": str(self.grading[x])} for x in self.gens],
            "boundary": [
                [order[x], [[order[y], self.exponent(x, y)] for y in sorted(self.boundary[x], key=order.get)]]
                for x in self.gens if self.boundary[x]
            ],
        })


@dataclass(frozen=True)
class GradedModule:
    """F[U]^{free} plus sum of F[U]/U^n; gradings are those of summand generators."""

    free: tuple[Fraction, ...] = ()
    torsion: tuple[tuple[Fraction, int], ...] = ()

    @classmethod
    def make(cls, free: Iterable, torsion: Iterable = ()) -> "GradedModule":
        return cls(tuple(sorted((Fraction(g) for g in free), reverse=True)),
                   tuple(sorted(((Fraction(g), int(n)) for g, n in torsion), key=lambda p: (-p[0], p[1]))))

    def __add__(self, other: "GradedModule") -> "GradedModule":
        return GradedModule.make(self.free + other.free, self.torsion + other.torsion)

    def shifted(self, by) -> "GradedModule":
        return GradedModule.make([g + by for g in self.free], [(g + by, n) for g, n in self.torsion])

    @property
    def is_tower(self) -> bool:
        return len(self.free) == 1 and not self.torsion

    def rank_in_degree(self, h) -> int:
        h = Fraction(h)
        r = sum(1 for g in self.free if g >= h and (g - h) % 2 == 0)
        r += sum(1 for g, n in self.torsion if g >= h > g - 2 * n and (g - h) % 2 == 0)
        return r

    def to_dict(self) -> dict:
        from .graph import fraction_str
        return {"free": [fraction_str(g) for g in self.free],
                "torsion": [[fraction_str(g), n] for g, n in self.torsion]}


class _Reducer:
    """Sparse graded Smith reduction by pivoting on the smallest available exponent.

    Pivoting x -> y (exponent t, minimal among remaining entries) splits off
    the summand F[U]/U^t generated at y, or cancels the pair when t = 0.
    Only the support of columns is stored; exponents come from gradings.
    """

    def __init__(self, gr: list[Fraction], cols: list[set[int]], track: bool = False):
        self.gr = gr
        # integer copies of the gradings make exponent lookups cheap
        base = min(gr, default=Fraction(0))
        offsets = {g: g - base for g in set(gr)}
        if all(o.denominator == 1 for o in offsets.values()):
            ints = {g: int(o) for g, o in offsets.items()}
            self.gi = [ints[g] for g in gr]
        else:
            self.gi = None
        self.cols = cols
        self.rows: list[set[int]] = [set() for _ in gr]
        for x, c in enumerate(cols):
            for y in c:
                self.rows[y].add(x)
        self.alive = [True] * len(gr)
        self.chain = [{i} for i in range(len(gr))] if track else None
        self.torsion: list[tuple[Fraction, int, int, int]] = []
        self.torsion_cycles: dict[int, frozenset] = {}

    def t(self, x: int, y: int) -> int:
        if self.gi is None:
            return _exponent(self.gr[x], self.gr[y])
        t2 = self.gi[y] - self.gi[x] + 1
        if t2 < 0 or t2 & 1:
            raise GradingError(f"no monomial U^t takes grading {self.gr[x]} - 1 to {self.gr[y]}")
        return t2 >> 1

    def run(self, allowed: Callable[[int, int], bool] | None = None, zero_only: bool = False) -> None:
        self._cancel_units(allowed)
        if zero_only:
            return
        heap = []
        for x, c in enumerate(self.cols):
            for y in c:
                self._push(heap, x, y, allowed, False)
        cols, alive = self.cols, self.alive
        while heap:
            t, x, y = heapq.heappop(heap)
            if not (alive[x] and alive[y] and y in cols[x]):
                continue
            self._pivot(x, y, t, lambda x2, w: self._push(heap, x2, w, allowed, False))

    def _cancel_units(self, allowed) -> None:
        """Cancel exponent-zero entries first; any order gives a homotopy equivalent complex."""
        cols, alive = self.cols, self.alive
        todo = list(range(len(cols) - 1, -1, -1))
        pending = [True] * len(cols)
        while todo:
            x = todo.pop()
            pending[x] = False
            if not alive[x]:
                continue
            y = next((y for y in sorted(cols[x]) if self.t(x, y) == 0
                      and (allowed is None or allowed(x, y))), None)
            if y is None:
                continue
            touched = [x2 for x2 in self.rows[y] if x2 != x]
            self._pivot(x, y, 0, None)
            for x2 in touched:
                if not pending[x2]:
                    pending[x2] = True
                    todo.append(x2)

    def _pivot(self, x: int, y: int, t: int, on_new) -> None:
        cols, rows = self.cols, self.rows
        cx = cols[x]
        for x2 in sorted(rows[y]):
            if x2 == x:
                continue
            c2 = cols[x2]
            for w in cx:
                if w in c2:
                    c2.discard(w)
                    rows[w].discard(x2)
                else:
                    c2.add(w)
                    rows[w].add(x2)
                    if on_new is not None:
                        on_new(x2, w)
            if self.chain is not None:
                self.chain[x2] ^= self.chain[x]
        if t > 0:
            self.torsion.append((self.gr[y], t, x, y))
            if self.chain is not None:
                # the new target basis element is U^-t dx; record it as a chain
                z = set(self.chain[y])
                for w in cx:
                    if w != y:
                        z ^= self.chain[w]
                self.torsion_cycles[y] = frozenset(z)
        self._remove(x)
        self._remove(y)

    def _push(self, heap, x, y, allowed, zero_only):
        t = self.t(x, y)
        if zero_only and t:
            return
        if allowed is not None and not allowed(x, y):
            return
        heapq.heappush(heap, (t, x, y))

    def _remove(self, v: int) -> None:
        self.alive[v] = False
        for w in self.cols[v]:
            self.rows[w].discard(v)
        for z in self.rows[v]:
            self.cols[z].discard(v)
        self.cols[v] = set()
        self.rows[v] = set()

    def survivors(self) -> list[int]:
        return [i for i, a in enumerate(self.alive) if a]


def _indexed(c: GradedFreeComplex):
    idx = {x: i for i, x in enumerate(c.gens)}
    gr = [c.grading[x] for x in c.gens]
    cols = [{idx[y] for y in c.boundary[x]} for x in c.gens]
    return idx, gr, cols


@dataclass
class HomologyResult:
    module: GradedModule
    free_cycles: list[tuple[Fraction, frozenset]] = field(default_factory=list)


def homology_with_cycles(c: GradedFreeComplex, track: bool = True) -> HomologyResult:
    idx, gr, cols = _indexed(c)
    red = _Reducer(gr, cols, track=track)
    red.run()
    surv = red.survivors()
    for x in surv:
        if red.cols[x]:
            raise StructureError("reduction left a nonzero entry")
    module = GradedModule.make([gr[x] for x in surv], [(g, t) for g, t, _, _ in red.torsion])
    cycles = []
    if track:
        for x in sorted(surv, key=lambda v: (-gr[v], v)):
            cycles.append((gr[x], frozenset(c.gens[i] for i in red.chain[x])))
    return HomologyResult(module, cycles)


class TruncationError(RuntimeError):
    """Homology could not be certified on the available truncation."""

    def __init__(self, msg: str, partial=None):
        super().__init__(msg)
        self.partial = partial


@dataclass
class TruncatedHomology:
    """Homology of a finite truncation, trusted strictly above ``floor``.

    The one summand reaching down to the floor is the U-tower; ``summands``
    lists (grading, order or None, generator) for everything kept.
    """

    module: GradedModule
    floor: Fraction
    tower: Fraction
    cycle: frozenset | None
    summands: list[tuple[Fraction, int | None, Hashable]]


def truncated_homology(c: GradedFreeComplex, floor, track: bool = False) -> TruncatedHomology | None:
    """None when the truncation does not determine the homology above ``floor``."""
    floor = Fraction(floor)
    idx, gr, cols = _indexed(c)
    red = _Reducer(gr, cols, track=track)
    red.run()
    found = [(gr[x], None, x) for x in red.survivors()]
    found += [(g, t, y) for g, t, _, y in red.torsion]
    kept, runners = [], []
    for g, t, v in found:
        if g <= floor:
            continue
        if t is None or g - 2 * t <= floor:
            runners.append((g, None, v))
        else:
            kept.append((g, t, v))
    if len(runners) != 1:
        return None
    g, _, v = runners[0]
    cycle = None
    if track:
        chain = red.chain[v] if red.alive[v] else red.torsion_cycles[v]
        cycle = frozenset(c.gens[i] for i in chain)
    summands = [(g, None, c.gens[v])] + [(h, t, c.gens[w]) for h, t, w in kept]
    module = GradedModule.make([g], [(h, t) for h, t, _ in kept])
    return TruncatedHomology(module, floor, g, cycle, summands)


def pushes_nonzero(cycle: Iterable, degree, target: GradedFreeComplex, floor) -> bool | None:
    """Is the image of a tower cycle (identity on generators) nonzero in the target homology?

    None when ``degree`` is not above the target's trusted floor.
    """
    cycle = set(cycle)
    acc: set = set()
    for y in cycle:
        acc ^= target.boundary[y]
    if acc:
        raise StructureError("image of a cycle is not a cycle")
    if Fraction(degree) <= Fraction(floor):
        return None
    return not is_boundary(target, cycle, degree)


def homology(c: GradedFreeComplex) -> GradedModule:
    return homology_with_cycles(c, track=False).module


def is_boundary(c: GradedFreeComplex, chain: Iterable, degree) -> bool:
    """Is the homogeneous chain (support set, at the given degree) a boundary?"""
    degree = Fraction(degree)
    target = [y for y in c.gens if c.grading[y] >= degree and (c.grading[y] - degree) % 2 == 0]
    pos = {y: i for i, y in enumerate(target)}
    want = 0
    for y in chain:
        want ^= 1 << pos[y]
    if not want:
        return True
    src_deg = degree + 1
    basis: dict[int, int] = {}  # pivot bit -> vector
    for x in c.gens:
        gx = c.grading[x]
        if gx < src_deg or (gx - src_deg) % 2:
            continue
        v = 0
        for y in c.boundary[x]:
            v ^= 1 << pos[y]
        while v:
            p = v.bit_length() - 1
            if p in basis:
                v ^= basis[p]
            else:
                basis[p] = v
                break
    while want:
        p = want.bit_length() - 1
        if p not in basis:
            return False
        want ^= basis[p]
    return True


def solve_f2(rows: list[tuple[int, int]], nvars: int) -> int | None:
    """Solve a linear system over F2; rows are (bitmask of variables, rhs bit)."""
    pivots: dict[int, tuple[int, int]] = {}
    for mask, rhs in rows:
        while mask:
            p = mask.bit_length() - 1
            if p not in pivots:
                pivots[p] = (mask, rhs)
                break
            pm, pr = pivots[p]
            mask ^= pm
            rhs ^= pr
        else:
            if rhs:
                return None
    sol = 0
    for p in sorted(pivots):
        mask, rhs = pivots[p]
        # lower variables are already fixed; free variables stay 0
        rest = mask & ~(1 << p)
        if bin(rest & sol).count("1") % 2 != rhs:
            sol |= 1 << p
    return sol


def tower_cocycle(c: GradedFreeComplex, q, cycle: Iterable) -> frozenset:
    """Support of an F[U]-linear chain map c -> F[U]<q> that is nonzero on ``cycle``.

    Such a map sends x to U^{(q - gr x)/2} when x is in the support, so only
    generators at gradings q - 2j are eligible.
    """
    q = Fraction(q)
    elig = [x for x in c.gens if c.grading[x] <= q and (q - c.grading[x]) % 2 == 0]
    pos = {x: i for i, x in enumerate(elig)}
    rows = []
    for z in c.gens:
        mask = 0
        for y in c.boundary[z]:
            if y in pos:
                mask ^= 1 << pos[y]
        if mask:
            rows.append((mask, 0))
    mask = 0
    for y in cycle:
        if y in pos:
            mask ^= 1 << pos[y]
    rows.append((mask, 1))
    sol = solve_f2(rows, len(elig))
    if sol is None:
        raise StructureError("no cocycle detects the tower")
    return frozenset(x for x, i in pos.items() if sol >> i & 1)


@dataclass
class ChainMap:
    """Degree-preserving F2[U]-map given on generators (image supports)."""

    source: GradedFreeComplex
    target: GradedFreeComplex
    images: dict[Hashable, frozenset]

    def apply(self, chain: Iterable) -> set:
        out: set = set()
        for x in chain:
            out ^= set(self.images.get(x, ()))
        return out

    def check(self) -> None:
        for x in self.source.gens:
            for y in self.images.get(x, ()):
                e = (self.target.grading[y] - self.source.grading[x]) / 2
                if e.denominator != 1 or e < 0:
                    raise GradingError("map is not a degree-preserving F[U]-map")
            lhs = self.target_boundary(self.images.get(x, ()))
            rhs = self.apply(self.source.boundary[x])
            if lhs != rhs:
                raise StructureError(f"not a chain map at {x!r}")

    def target_boundary(self, chain) -> set:
        out: set = set()
        for y in chain:
            out ^= self.target.boundary[y]
        return out


def induced_power(f: ChainMap) -> int:
    """The e with f_* = U^e, for complexes whose homology is a single tower."""
    hs = homology_with_cycles(f.source)
    ht = homology(f.target)
    if not hs.module.is_tower or not ht.is_tower:
        raise StructureError(f"homologies are not F[U]: {hs.module} -> {ht}")
    mu, z = hs.free_cycles[0]
    image = f.apply(z)
    if f.target_boundary(image):
        raise StructureError("image of a cycle is not a cycle")
    if is_boundary(f.target, image, mu):
        raise StructureError("induced map vanishes on homology")
    e = (ht.free[0] - mu) / 2
    if e.denominator != 1 or e < 0:
        raise StructureError("grading mismatch in induced map")
    return int(e)


# --- bifiltered complexes -------------------------------------------------

@dataclass
class BifilteredComplex:
    complex: GradedFreeComplex
    alexander: dict[Hashable, Fraction]

    def __post_init__(self):
        self.alexander = {x: Fraction(self.alexander[x]) for x in self.complex.gens}

    @property
    def gens(self):
        return self.complex.gens

    def check(self) -> None:
        c = self.complex
        c.check()
        for x in c.gens:
            for y in c.boundary[x]:
                if self.alexander[y] - c.exponent(x, y) > self.alexander[x]:
                    raise GradingError(f"entry {x!r} -> {y!r} raises the Alexander filtration")

    def is_minimal(self) -> bool:
        c = self.complex
        return not any(c.exponent(x, y) == 0 and self.alexander[x] == self.alexander[y]
                       for x in c.gens for y in c.boundary[x])

    def signature(self) -> tuple:
        """Sorted multiset of (Maslov, Alexander, parity) over generators."""
        out = []
        for x in self.gens:
            g = self.complex.grading[x]
            out.append((g, self.alexander[x], int(g - min(self.complex.grading.values())) % 2))
        return tuple(sorted(out))

    def relabel(self) -> "BifilteredComplex":
        """Same complex with generators renamed 0..n-1 (in current order)."""
        idx = {x: i for i, x in enumerate(self.gens)}
        c = self.complex
        return BifilteredComplex(
            GradedFreeComplex(list(range(len(idx))), {idx[x]: c.grading[x] for x in c.gens},
                              {idx[x]: {idx[y] for y in c.boundary[x]} for x in c.gens}),
            {idx[x]: self.alexander[x] for x in c.gens})

    def shifted_complex(self, power: Callable[[Hashable], int]) -> GradedFreeComplex:
        """Free complex on the generators U^{power(x)} x (power may be negative)."""
        c = self.complex
        return GradedFreeComplex(list(c.gens), {x: c.grading[x] - 2 * power(x) for x in c.gens},
                                 c.boundary)


def minimal_model(b: BifilteredComplex) -> BifilteredComplex:
    """Filtered Gaussian elimination of every unit entry between equal Alexander levels."""
    c = b.complex
    idx, gr, cols = _indexed(c)
    alex = [b.alexander[x] for x in c.gens]
    red = _Reducer(gr, cols)
    red.run(allowed=lambda x, y: alex[x] == alex[y], zero_only=True)
    surv = red.survivors()
    gens = [c.gens[i] for i in surv]
    out = BifilteredComplex(
        GradedFreeComplex(gens, {c.gens[i]: gr[i] for i in surv},
                          {c.gens[i]: {c.gens[j] for j in red.cols[i]} for i in surv}),
        {c.gens[i]: alex[i] for i in surv})
    return out


def tensor(b1: BifilteredComplex, b2: BifilteredComplex) -> BifilteredComplex:
    c1, c2 = b1.complex, b2.complex
    gens = [(x, y) for x in c1.gens for y in c2.gens]
    gr = {(x, y): c1.grading[x] + c2.grading[y] for x, y in gens}
    bd = {}
    for x, y in gens:
        s = {(w, y) for w in c1.boundary[x]}
        s ^= {(x, w) for w in c2.boundary[y]}
        bd[(x, y)] = s
    alex = {(x, y): b1.alexander[x] + b2.alexander[y] for x, y in gens}
    return BifilteredComplex(GradedFreeComplex(gens, gr, bd), alex)


def unit_complex() -> BifilteredComplex:
    return BifilteredComplex(GradedFreeComplex([0], {0: Fraction(0)}, {}), {0: Fraction(0)})
