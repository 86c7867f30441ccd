"""Fundamental cycles and rationality tests (Laufer iteration against the genus formula)."""
from __future__ import annotations

from dataclasses import dataclass, field

from .graph import PlumbingGraph


class IterationCapExceeded(RuntimeError):
    """Cycle iteration ran too long; the input is probably not negative definite."""


class RationalityDisagreement(AssertionError):
    pass


def _cap(g: PlumbingGraph) -> int:
    return 16 * len(g) * max(1, max(abs(m) for m in g.framing))


def _products(g: PlumbingGraph, z: list[int]) -> list[int]:
    m = g.matrix
    return [sum(z[j] * m[i][j] for j in range(len(z))) for i in range(len(z))]


def artin_cycle(g: PlumbingGraph) -> tuple[int, ...]:
    """Minimal nonzero cycle Z >= 0 with Z.E_i <= 0 for all i (connected G)."""
    g.require_definite()
    if len(g.components()) != 1:
        raise ValueError("artin_cycle needs a connected graph")
    z = [1] * len(g)
    for _ in range(_cap(g)):
        prods = _products(g, z)
        bad = next((i for i, p in enumerate(prods) if p > 0), None)
        if bad is None:
            return tuple(z)
        z[bad] += 1
    raise IterationCapExceeded("artin_cycle")


def geometric_genus(g: PlumbingGraph, z) -> int:
    """p(Z) = (Z^2 + K.Z)/2 + 1 with K.E_i = -E_i^2 - 2."""
    zz = g.pair(z, z)
    kz = sum(n * (-m - 2) for n, m in zip(z, g.framing))
    return (zz + kz) // 2 + 1


@dataclass
class RationalityReport:
    rational: bool
    method: str
    trace: list[tuple[int, ...]] = field(default_factory=list)
    per_component: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "rational": self.rational,
            "method": self.method,
            "trace": [list(z) for z in self.trace],
            "components": self.per_component,
        }


def laufer(g: PlumbingGraph) -> tuple[bool, list[tuple[int, ...]]]:
    """Laufer's computation sequence on a connected graph; returns (rational, Z-sequence)."""
    z = [1] * len(g)
    trace = []
    for _ in range(_cap(g)):
        trace.append(tuple(z))
        prods = _products(g, z)
        if any(p >= 2 for p in prods):
            return False, trace
        if all(p <= 0 for p in prods):
            return True, trace
        i = next(i for i, p in enumerate(prods) if p == 1)
        z[i] += 1
    raise IterationCapExceeded("laufer")


def genus_test(g: PlumbingGraph) -> bool:
    return geometric_genus(g, artin_cycle(g)) == 0


def is_rational(g: PlumbingGraph, method: str = "both") -> RationalityReport:
    if method not in ("laufer", "genus", "both"):
        raise ValueError(f"unknown method {method!r}")
    g.require_definite()
    verdict, trace, comps = True, [], []
    for comp in g.components():
        sub = g.subgraph(comp)
        entry: dict = {"vertices": list(comp)}
        if method in ("laufer", "both"):
            ok, tr = laufer(sub)
            entry["laufer"] = ok
            entry["trace"] = [list(z) for z in tr]
            trace.extend(tr)
        if method in ("genus", "both"):
            z = artin_cycle(sub)
            entry["artin_cycle"] = list(z)
            entry["genus"] = geometric_genus(sub, z)
            ok_g = entry["genus"] == 0
            if method == "both" and ok_g != entry["laufer"]:
                raise RationalityDisagreement(f"Laufer and genus tests disagree on {comp}")
            ok = ok_g
        comps.append(entry)
        verdict = verdict and ok
    return RationalityReport(verdict, method, trace, comps)


def low_framing(g: PlumbingGraph) -> int:
    return -(2 * len(g) * (1 + max(abs(m) for m in g.framing)))


def is_almost_rational(g: PlumbingGraph, bound: int | None = None) -> tuple[str, int] | None:
    """First vertex w (in vertex order) whose framing, lowered to ``bound``, makes G rational."""
    g.require_definite()
    m_low = low_framing(g) if bound is None else bound
    for w in g.vertices:
        m = min(g.framing_of(w), m_low)
        if is_rational(g.with_framings({w: m}), "laufer").rational:
            return w, m
    return None
