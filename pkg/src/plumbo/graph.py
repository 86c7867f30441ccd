"""Plumbing graphs and marked graphs, with JSON I/O and the graph surgeries."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from . import linalg


class GraphError(ValueError):
    """Malformed or unsupported graph input."""


class NotNegativeDefinite(GraphError):
    pass


@dataclass(frozen=True)
class PlumbingGraph:
    """A framed forest. Vertices are kept sorted, which fixes all orderings."""

    vertices: tuple[str, ...]
    framing: tuple[int, ...]
    edges: frozenset[frozenset[str]] = field(default_factory=frozenset)

    def __post_init__(self):
        if list(self.vertices) != sorted(self.vertices):
            raise GraphError("vertices must be sorted; use PlumbingGraph.build")
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex")
        if len(self.framing) != len(self.vertices):
            raise GraphError("every vertex needs a framing")
        known = set(self.vertices)
        for e in self.edges:
            if len(e) != 2:
                raise GraphError("cycle detected")
            if not e <= known:
                raise GraphError(f"edge {sorted(e)} uses an unknown vertex")
        _check_forest(self.vertices, self.edges)

    @classmethod
    def build(cls, framing: Mapping[str, int], edges: Iterable[Iterable[str]] = ()) -> "PlumbingGraph":
        vs = tuple(sorted(framing))
        es = []
        for e in edges:
            pair = list(e)
            if len(pair) != 2:
                raise GraphError(f"bad edge {pair}")
            if pair[0] == pair[1]:
                raise GraphError("cycle detected")
            fe = frozenset(pair)
            if fe in es:
                raise GraphError("cycle detected")
            es.append(fe)
        return cls(vs, tuple(int(framing[v]) for v in vs), frozenset(es))

    def __len__(self) -> int:
        return len(self.vertices)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def framing_of(self, v: str) -> int:
        return self.framing[self.index[v]]

    def neighbours(self, v: str) -> list[str]:
        return sorted(next(iter(e - {v})) for e in self.edges if v in e)

    @cached_property
    def matrix(self) -> linalg.Matrix:
        n = len(self.vertices)
        m = [[0] * n for _ in range(n)]
        for i, f in enumerate(self.framing):
            m[i][i] = f
        for e in self.edges:
            a, b = (self.index[v] for v in e)
            m[a][b] = m[b][a] = 1
        return m

    @cached_property
    def is_negative_definite(self) -> bool:
        return linalg.is_negative_definite(self.matrix)

    @cached_property
    def det(self) -> int:
        return linalg.determinant(self.matrix)

    @cached_property
    def inverse(self) -> linalg.QMatrix:
        return linalg.inverse(self.matrix)

    def require_definite(self) -> None:
        if not self.is_negative_definite:
            raise NotNegativeDefinite("intersection form is not negative definite")

    def pair(self, x, y):
        """Intersection pairing of two coefficient vectors."""
        return linalg.dot(x, linalg.mat_vec(self.matrix, y))

    def components(self) -> list[tuple[str, ...]]:
        seen: set[str] = set()
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            stack, comp = [v], []
            seen.add(v)
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in self.neighbours(u):
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            comps.append(tuple(sorted(comp)))
        return comps

    def subgraph(self, keep: Iterable[str]) -> "PlumbingGraph":
        keep = set(keep)
        return PlumbingGraph.build(
            {v: self.framing_of(v) for v in keep},
            [tuple(e) for e in self.edges if e <= keep],
        )

    def with_framings(self, changes: Mapping[str, int]) -> "PlumbingGraph":
        fr = {v: changes.get(v, f) for v, f in zip(self.vertices, self.framing)}
        return PlumbingGraph.build(fr, [tuple(e) for e in self.edges])

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": v, "framing": f} for v, f in zip(self.vertices, self.framing)],
            "edges": sorted(sorted(e) for e in self.edges),
        }


def _check_forest(vertices, edges) -> None:
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in edges:
        a, b = tuple(e)
        ra, rb = find(a), find(b)
        if ra == rb:
            raise GraphError("cycle detected")
        parent[ra] = rb


@dataclass(frozen=True)
class MarkedGraph:
    """A plumbing forest plus an unframed vertex ``v0`` attached to some of its vertices."""

    graph: PlumbingGraph
    v0: str
    attachments: frozenset[str]

    def __post_init__(self):
        if self.v0 in self.graph.index:
            raise GraphError("distinguished vertex must not carry a framing")
        if not self.attachments:
            raise GraphError("distinguished vertex has no neighbours")
        if not self.attachments <= set(self.graph.vertices):
            raise GraphError("attachment to unknown vertex")
        # v0 meets each component at most once, otherwise Gamma has a cycle
        comps = self.graph.components()
        for comp in comps:
            if len(self.attachments & set(comp)) > 1:
                raise GraphError("cycle detected")

    @property
    def adjacency(self) -> tuple[int, ...]:
        return tuple(int(v in self.attachments) for v in self.graph.vertices)

    def is_leaf(self) -> bool:
        return len(self.attachments) == 1

    def to_dict(self) -> dict:
        d = self.graph.to_dict()
        d["vertices"].append({"id": self.v0})
        d["edges"] = sorted(d["edges"] + [sorted([self.v0, a]) for a in self.attachments])
        d["distinguished"] = self.v0
        return d


def parse_graph(text: str) -> PlumbingGraph | MarkedGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed document: {exc}") from None
    return graph_from_dict(doc)


def graph_from_dict(doc) -> PlumbingGraph | MarkedGraph:
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise GraphError("malformed document: expected an object with 'vertices'")
    v0 = doc.get("distinguished")
    framing: dict[str, int] = {}
    seen = set()
    for item in doc["vertices"]:
        if not isinstance(item, dict) or not isinstance(item.get("id"), str):
            raise GraphError("malformed vertex entry")
        vid = item["id"]
        if vid in seen:
            raise GraphError(f"duplicate vertex {vid!r}")
        seen.add(vid)
        if vid == v0:
            if item.get("framing") is not None:
                raise GraphError("distinguished vertex must not carry a framing")
            continue
        f = item.get("framing")
        if not isinstance(f, int) or isinstance(f, bool):
            raise GraphError(f"vertex {vid!r} needs an integer framing")
        framing[vid] = f
    if v0 is not None and v0 not in seen:
        raise GraphError("distinguished vertex is not listed among the vertices")
    edges, attach = [], set()
    for e in doc.get("edges", []):
        if not isinstance(e, list) or len(e) != 2 or not all(isinstance(x, str) for x in e):
            raise GraphError("malformed edge entry")
        if e[0] == e[1]:
            raise GraphError("cycle detected")
        for x in e:
            if x not in seen:
                raise GraphError(f"edge mentions unknown vertex {x!r}")
        if v0 is not None and v0 in e:
            other = e[1] if e[0] == v0 else e[0]
            if other in attach:
                raise GraphError("cycle detected")
            attach.add(other)
        else:
            edges.append(e)
    g = PlumbingGraph.build(framing, edges)
    if v0 is None:
        return g
    return MarkedGraph(g, v0, frozenset(attach))


def dump_graph(g: PlumbingGraph | MarkedGraph) -> str:
    return json.dumps(g.to_dict(), sort_keys=True)


def intersection_form(g: PlumbingGraph) -> tuple[linalg.Matrix, bool]:
    return [row[:] for row in g.matrix], g.is_negative_definite


def with_framing(marked: MarkedGraph, m: int) -> PlumbingGraph:
    """Frame the distinguished vertex with ``m``; the result must be negative definite."""
    g = marked.graph
    fr = dict(zip(g.vertices, g.framing))
    fr[marked.v0] = m
    edges = [tuple(e) for e in g.edges] + [(marked.v0, a) for a in sorted(marked.attachments)]
    out = PlumbingGraph.build(fr, edges)
    out.require_definite()
    return out


def chain_expand(marked: MarkedGraph, p: int) -> PlumbingGraph:
    """Graph whose boundary is +p surgery on a leaf knot, as a negative plumbing.

    The neighbour w of v0 loses one from its framing and the edge w--v0 is
    replaced by a string of p-1 vertices framed -2.
    """
    if p < 1:
        raise GraphError("p must be positive")
    if not marked.is_leaf():
        raise GraphError("chain_expand needs v0 to be a leaf")
    g = marked.graph
    (w,) = marked.attachments
    fr = dict(zip(g.vertices, g.framing))
    fr[w] -= 1
    edges = [tuple(e) for e in g.edges]
    prev = w
    for j in range(1, p):
        name = _fresh(f"{marked.v0}.{j}", fr)
        fr[name] = -2
        edges.append((prev, name))
        prev = name
    out = PlumbingGraph.build(fr, edges)
    out.require_definite()
    return out


def _fresh(name: str, taken) -> str:
    out, k = name, 0
    while out in taken:
        k += 1
        out = f"{name}~{k}"
    return out


def disjoint_union(g1: PlumbingGraph, g2: PlumbingGraph, prefixes=("L.", "R.")) -> tuple[PlumbingGraph, dict, dict]:
    """Disjoint union; ids are prefixed only when the two id sets collide."""
    if set(g1.vertices) & set(g2.vertices):
        r1 = {v: prefixes[0] + v for v in g1.vertices}
        r2 = {v: prefixes[1] + v for v in g2.vertices}
    else:
        r1 = {v: v for v in g1.vertices}
        r2 = {v: v for v in g2.vertices}
    fr = {r1[v]: f for v, f in zip(g1.vertices, g1.framing)}
    fr.update({r2[v]: f for v, f in zip(g2.vertices, g2.framing)})
    edges = [tuple(r1[x] for x in e) for e in g1.edges] + [tuple(r2[x] for x in e) for e in g2.edges]
    return PlumbingGraph.build(fr, edges), r1, r2


def connected_sum(m1: MarkedGraph, m2: MarkedGraph) -> MarkedGraph:
    g, r1, r2 = disjoint_union(m1.graph, m2.graph)
    attach = {r1[a] for a in m1.attachments} | {r2[a] for a in m2.attachments}
    v0 = _fresh(m1.v0, g.index)
    return MarkedGraph(g, v0, frozenset(attach))


def mark_vertex(g: PlumbingGraph, w: str) -> tuple[MarkedGraph, int]:
    """Erase the framing of ``w``: returns (w marked over G - w, the erased framing)."""
    if w not in g.index:
        raise GraphError(f"unknown vertex {w!r}")
    rest = g.subgraph(v for v in g.vertices if v != w)
    return MarkedGraph(rest, w, frozenset(g.neighbours(w))), g.framing_of(w)


def fraction_str(q: Fraction | int) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
