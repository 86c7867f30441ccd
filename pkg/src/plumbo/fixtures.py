"""Built-in graphs shared by the self-test and the CLI."""
from __future__ import annotations

import itertools

from .graph import MarkedGraph, PlumbingGraph, connected_sum, with_framing


def one_vertex(m: int) -> PlumbingGraph:
    return PlumbingGraph.build({"a": m})


def chain(framings) -> PlumbingGraph:
    names = [f"v{i}" for i in range(len(framings))]
    return PlumbingGraph.build(dict(zip(names, framings)), list(zip(names, names[1:])))


def a_chain(n: int) -> PlumbingGraph:
    return chain([-2] * n)


def e8() -> PlumbingGraph:
    fr = {f"v{i}": -2 for i in range(8)}
    edges = [(f"v{i}", f"v{i + 1}") for i in range(6)] + [("v2", "v7")]
    return PlumbingGraph.build(fr, edges)


def star(center: int, legs) -> PlumbingGraph:
    fr = {"c": center}
    names = "pqrstu"
    for name, m in zip(names, legs):
        fr[name] = m
    return PlumbingGraph.build(fr, [("c", n) for n in names[:len(legs)]])


def sigma237() -> PlumbingGraph:
    return star(-1, [-2, -3, -7])


def unknot() -> MarkedGraph:
    return MarkedGraph(one_vertex(-1), "v0", frozenset({"a"}))


def trefoil() -> MarkedGraph:
    return MarkedGraph(star(-1, [-2, -3]), "v0", frozenset({"c"}))


def trefoil_sum() -> MarkedGraph:
    return connected_sum(trefoil(), trefoil())


def type_two() -> PlumbingGraph:
    """Two trefoil stars joined through one -13 vertex; both -1 centres are bad."""
    return with_framing(trefoil_sum(), -13)


# (graph, vertex whose framing is erased) for the whole-graph cone
def short_chain() -> tuple[PlumbingGraph, str]:
    return chain([-1, -2]), "v0"


def completed_trefoil() -> tuple[PlumbingGraph, str]:
    return sigma237(), "r"


CONE_GRAPHS = {
    "short_chain": short_chain,
    "completed_trefoil": completed_trefoil,
    "type_two": lambda: (type_two(), trefoil_sum().v0),
}

# smallest k with G_{-k}(v0) negative definite, and how many values to try
SURGERY_K = {"unknot": (2, 5), "trefoil": (7, 10), "trefoil_sum": (13, 14)}

MARKS = {"unknot": unknot, "trefoil": trefoil, "trefoil_sum": trefoil_sum}

GRAPHS = {
    "m1": lambda: one_vertex(-1),
    "m2": lambda: one_vertex(-2),
    "a1": lambda: a_chain(1),
    "a2": lambda: a_chain(2),
    "a3": lambda: a_chain(3),
    "a4": lambda: a_chain(4),
    "e8": e8,
    "trefoil_star": lambda: star(-1, [-2, -3]),
    "sigma237": sigma237,
    "type_two": type_two,
}


def lookup(name: str) -> PlumbingGraph | MarkedGraph:
    if name in MARKS:
        return MARKS[name]()
    if name in GRAPHS:
        return GRAPHS[name]()
    raise KeyError(name)


def _canonical(n: int, fr, edges) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        key = (tuple(fr[perm[i]] for i in range(n)),
               tuple(sorted(tuple(sorted((perm.index(a), perm.index(b)))) for a, b in edges)))
        if best is None or key < best:
            best = key
    return best


def corpus(max_vertices: int = 4, framings=range(-4, 0)) -> list[PlumbingGraph]:
    """Negative definite trees up to isomorphism, in a fixed order."""
    seen, out = set(), []
    for n in range(1, max_vertices + 1):
        names = [f"v{i}" for i in range(n)]
        # parent arrays p[i] < i enumerate every labelled tree shape
        for parents in itertools.product(*[range(i) for i in range(1, n)]):
            edges = [(p, i + 1) for i, p in enumerate(parents)]
            for fr in itertools.product(framings, repeat=n):
                key = _canonical(n, fr, edges)
                if key in seen:
                    continue
                seen.add(key)
                g = PlumbingGraph.build(dict(zip(names, key[0])),
                                        [(names[a], names[b]) for a, b in key[1]])
                if g.is_negative_definite:
                    out.append(g)
    return out
