"""Model staircase complexes C(q, alpha; beta) and their comparison with knot complexes.

A model with n steps has generators y_1..y_{n+1} and x_1..x_n,

    d x_k = U^(beta_k - alpha_k) y_k + y_(k+1),    d y_k = 0,

with A(x_k) = alpha_k, A(y_k) = beta_k and M(y_1) = q.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .fu import BifilteredComplex, GradedFreeComplex, GradedModule, homology, minimal_model
from .graph import fraction_str
from .knot import StaircaseData, StaircaseLevel


class ModelError(ValueError):
    pass


def _even(x: Fraction) -> bool:
    return x.denominator == 1 and x.numerator % 2 == 0


@dataclass(frozen=True)
class ModelComplex:
    q: Fraction
    alphas: tuple[Fraction, ...]
    betas: tuple[Fraction, ...]

    @classmethod
    def make(cls, q, alphas: Sequence, betas: Sequence) -> "ModelComplex":
        return cls(Fraction(q), tuple(Fraction(a) for a in alphas), tuple(Fraction(b) for b in betas))

    @property
    def n(self) -> int:
        return len(self.alphas)

    def violations(self) -> list[str]:
        """Interleaving and parity conditions that fail, empty when the model is valid."""
        a, b = self.alphas, self.betas
        out = []
        if len(b) != len(a) + 1:
            return [f"{len(b)} betas for {len(a)} alphas"]
        for k in range(len(a)):
            if not b[k] > a[k] > b[k + 1]:
                out.append(f"beta_{k + 1} > alpha_{k + 1} > beta_{k + 2} fails")
        for name, fam in (("alpha", a), ("beta", b)):
            if any(not _even(x - fam[0]) for x in fam):
                out.append(f"{name} values are not congruent mod 2")
        if a and not _even(a[0] - b[0] - 1):
            out.append("alpha_1 is not congruent to beta_1 + 1 mod 2")
        return out

    def check(self) -> None:
        bad = self.violations()
        if bad:
            raise ModelError("; ".join(bad))

    def to_dict(self) -> dict:
        return {"q": fraction_str(self.q), "alphas": [fraction_str(x) for x in self.alphas],
                "betas": [fraction_str(x) for x in self.betas]}

    @classmethod
    def from_dict(cls, doc: dict) -> "ModelComplex":
        try:
            return cls.make(Fraction(str(doc["q"])), [Fraction(str(x)) for x in doc["alphas"]],
                            [Fraction(str(x)) for x in doc["betas"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelError(f"bad model document: {exc}") from exc


def extract_model(data: StaircaseData, strict: bool = True) -> ModelComplex:
    """Read the model off the jumps: beta_i = gamma_(2i-1), alpha_i = gamma_(2i).

    With ``strict`` the staircase must be free of recorded violations.
    """
    if strict and data.violations:
        raise ModelError("staircase data has violations: " + "; ".join(data.violations))
    gamma = sorted(data.jumps, reverse=True)
    if len(gamma) % 2 == 0:
        raise ModelError(f"even number of jumps ({len(gamma)})")
    m = ModelComplex(data.q, tuple(gamma[1::2]), tuple(gamma[0::2]))
    if strict:
        m.check()
    return m


def realize_model(m: ModelComplex) -> BifilteredComplex:
    m.check()
    gens, gr, bd, alex = [], {}, {}, {}
    level = m.q
    for k, beta in enumerate(m.betas, start=1):
        y = f"y{k}"
        gens.append(y)
        gr[y], bd[y], alex[y] = level, set(), beta
        if k <= m.n:
            step = beta - m.alphas[k - 1]
            x = f"x{k}"
            gens.append(x)
            gr[x] = level - 2 * step + 1
            bd[x] = {y, f"y{k + 1}"}
            alex[x] = m.alphas[k - 1]
            level -= 2 * step
    out = BifilteredComplex(GradedFreeComplex(gens, gr, bd), alex)
    out.check()
    return out


# --- exact staircase of a finite bifiltered complex --------------------------------

def _tower(c: GradedFreeComplex) -> tuple[Fraction, GradedModule]:
    h = homology(c)
    if len(h.free) != 1:
        raise ModelError(f"homology has {len(h.free)} free summands")
    return h.free[0], h


def finite_staircase(b: BifilteredComplex) -> StaircaseData:
    """Staircase data of a finite complex; no truncation is involved so every value is exact."""
    alex = b.alexander
    q, hb = _tower(b.shifted_complex(lambda x: 0))
    lo, hi = min(alex.values()), max(alex.values())
    r = lo - (lo.numerator // lo.denominator)
    lo, hi = lo - 1, hi + 1

    def a_cx(i):
        return b.shifted_complex(lambda x: max(Fraction(0), alex[x] - i))

    def c_cx(i):
        return b.shifted_complex(lambda x: alex[x] - i)

    cache = {}
    i = lo
    while i <= hi + 1:
        cache[i] = (_tower(a_cx(i)), _tower(c_cx(i)))
        i += 1
    levels, violations = [], []
    i = lo
    while i <= hi:
        (ta, ha), (tc, hc) = cache[i]
        ta1 = cache[i + 1][0][0]
        a, bb, d = (q - ta) / 2, (tc - ta) / 2, (ta1 - ta) / 2
        if not ha.is_tower:
            violations.append(f"H(A_{i}) = {ha.to_dict()} is not F[U]")
        if not hc.is_tower:
            violations.append(f"H(C_{i}) is not F[U]")
        if d not in (0, 1):
            violations.append(f"d_{i} = {d} not in {{0,1}}")
        levels.append(StaircaseLevel(i, int(a), int(bb), int(d), ha))
        i += 1
    if not hb.is_tower:
        violations.append("H(B) is not F[U]")
    jumps = [lv.i for prev, lv in zip(levels, levels[1:]) if lv.d != prev.d]
    if levels[0].d != 1:
        jumps.append(levels[0].i)
    jumps.sort(reverse=True)
    q_tw = _tower(c_cx(0))[0]
    return StaircaseData(None, r, q, q_tw, levels, jumps, violations, True, {})


def same_staircase(d1: StaircaseData, d2: StaircaseData) -> bool:
    """Same q and jumps, and the same (a, b, d) over the union of both windows."""
    if d1.q != d2.q or sorted(d1.jumps) != sorted(d2.jumps):
        return False
    lo = min(d1.window()[0], d2.window()[0])
    hi = max(d1.window()[1], d2.window()[1])
    if (lo - d1.window()[0]).denominator != 1 or (lo - d2.window()[0]).denominator != 1:
        return False
    i = lo
    while i <= hi:
        if d1.at(i) != d2.at(i):
            return False
        i += 1
    return True


def same_levels(d1: StaircaseData, d2: StaircaseData) -> bool:
    """same_staircase plus equal H(A_i) modules where both windows overlap."""
    if not same_staircase(d1, d2):
        return False
    m1 = {lv.i: lv.module for lv in d1.levels}
    m2 = {lv.i: lv.module for lv in d2.levels}
    return all(m1[i] == m2[i] for i in m1.keys() & m2.keys())


def model_equiv(c: BifilteredComplex, m: ModelComplex) -> bool:
    data = finite_staircase(c)
    if not data.lspace_type:
        raise ModelError("complex is not of L-space type")
    red = minimal_model(c)
    real = realize_model(m)
    return red.signature() == real.signature() and same_staircase(data, finite_staircase(real))


def complexes_equiv(c1: BifilteredComplex, c2: BifilteredComplex) -> bool:
    """Canonical comparison without the L-space hypothesis: reduced signatures and level homologies."""
    return (minimal_model(c1).signature() == minimal_model(c2).signature()
            and same_levels(finite_staircase(c1), finite_staircase(c2)))
