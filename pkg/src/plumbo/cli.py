"""plumbo command line: one JSON report per invocation on stdout."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import fixtures
from .fu import GradingError, StructureError, TruncationError
from .graph import GraphError, MarkedGraph, PlumbingGraph, connected_sum, graph_from_dict
from .knot import KnotError, min_definite_k

COMMANDS = ("rational", "homology", "dinv", "delta", "lspace", "knot", "model", "cone",
            "verify", "hfminus", "sum", "selftest")

EXIT_OK, EXIT_INPUT, EXIT_CONSISTENCY = 0, 1, 2


class InputError(ValueError):
    pass


class ConsistencyFailure(RuntimeError):
    def __init__(self, msg: str, report: dict | None = None):
        super().__init__(msg)
        self.report = report


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None = None
    nmax: int | None = None
    k_range: tuple[int, int] | None = None
    fmt: str = "json"
    seed: int = 0
    vertex: str | None = None
    kind: str = "auto"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.nmax is not None and self.nmax < 1:
            raise InputError("--nmax must be positive")
        if self.k_range is not None and not 1 <= self.k_range[0] <= self.k_range[1]:
            raise InputError("--k needs 1 <= A <= B")
        if self.fmt not in ("json", "table"):
            raise InputError("--format is json or table")


def parse_k(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return int(a), int(b)
        return int(text), int(text)
    except ValueError:
        raise InputError(f"bad --k value {text!r}; expected A..B") from None


# --- input ---------------------------------------------------------------------------

def load_input(cfg: RunConfig):
    """A graph or a marked graph; ``sum`` takes a pair of marked graphs.

    ``@name`` selects a built-in fixture instead of a file.
    """
    if cfg.input is None:
        raise InputError(f"{cfg.command} needs --input")
    if cfg.input.startswith("@"):
        names = cfg.input[1:].split("+")
        try:
            items = [fixtures.lookup(n) for n in names]
        except KeyError as exc:
            raise InputError(f"unknown fixture {exc.args[0]!r}") from None
        return items if len(items) > 1 else items[0]
    path = Path(cfg.input)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {cfg.input}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed document: {exc}") from None
    if isinstance(doc, list):
        return [graph_from_dict(d) for d in doc]
    return graph_from_dict(doc)


def _need_graph(obj) -> PlumbingGraph:
    if isinstance(obj, PlumbingGraph):
        return obj
    raise InputError("this command needs a framed graph without a distinguished vertex")


def _need_marked(obj) -> MarkedGraph:
    if isinstance(obj, MarkedGraph):
        return obj
    raise InputError("this command needs a graph with a distinguished vertex")


# --- commands ------------------------------------------------------------------------

def _rational(cfg, obj) -> dict:
    from .rational import is_almost_rational, is_rational

    g = _need_graph(obj)
    g.require_definite()
    lau = is_rational(g, "laufer")
    art = is_rational(g, "genus")
    if lau.rational != art.rational:
        raise ConsistencyFailure("Laufer and genus tests disagree",
                                 {"laufer": lau.to_dict(), "genus": art.to_dict()})
    almost = is_almost_rational(g)
    return {"rational": lau.rational, "trace": [list(z) for z in lau.trace],
            "components": lau.per_component,
            "almost_rational": None if almost is None else {"vertex": almost[0], "framing": almost[1]}}


def _homology(cfg, obj) -> dict:
    from .lattice import lattice_homology
    from .spinc import spinc_classes

    g = _need_graph(obj)
    g.require_definite()
    kw = {} if cfg.nmax is None else {"max_level": cfg.nmax}
    return {"classes": [lattice_homology(g, s, **kw).to_dict() for s in spinc_classes(g)]}


def _dinv(cfg, obj) -> dict:
    from .graph import fraction_str
    from .lattice import d_invariant, max_zero_cube_grading
    from .spinc import spinc_classes

    g = _need_graph(obj)
    g.require_definite()
    out = []
    for s in spinc_classes(g):
        d = d_invariant(g, s)
        row = {"spinc": s.to_dict(), "d": fraction_str(d.value),
               "max_zero_cube": fraction_str(max_zero_cube_grading(g, s)),
               "zero_cube_representative": None if d.representative is None else list(d.representative)}
        out.append(row)
    return {"classes": out}


def _delta(cfg, obj) -> dict:
    from .lattice import delta_split
    from .spinc import spinc_classes

    g = _need_graph(obj)
    g.require_definite()
    return {"classes": [{"spinc": s.to_dict(),
                         "delta": {str(k): v.to_dict() for k, v in sorted(delta_split(g, s).items())}}
                        for s in spinc_classes(g)]}


def _lspace(cfg, obj) -> dict:
    from .lattice import lattice_homology
    from .spinc import spinc_classes

    g = _need_graph(obj)
    g.require_definite()
    per = [{"spinc": s.index, "free_only": not lattice_homology(g, s).module.torsion}
           for s in spinc_classes(g)]
    return {"lspace": all(p["free_only"] for p in per), "classes": per}


def _knot(cfg, obj) -> dict:
    from .knot import staircase_all

    m = _need_marked(obj)
    kw = {} if cfg.nmax is None else {"max_level": cfg.nmax}
    return {"classes": [sd.to_dict() for sd in staircase_all(m, **kw)]}


def _model(cfg, obj) -> dict:
    from .model import ModelError, extract_model
    from .knot import staircase_all

    m = _need_marked(obj)
    out = []
    for sd in staircase_all(m):
        row = {"spinc": sd.s.to_dict(), "violations": list(sd.violations)}
        try:
            row["model"] = extract_model(sd, strict=False).to_dict()
            row["valid"] = not sd.violations
        except ModelError as exc:
            row["model"], row["valid"], row["error"] = None, False, str(exc)
        out.append(row)
    return {"classes": out}


def _k_values(cfg, m: MarkedGraph) -> list[int]:
    lo = min_definite_k(m)
    a, b = cfg.k_range if cfg.k_range is not None else (lo, lo + 1)
    if a < lo:
        raise InputError(f"G_(-k) is negative definite only for k >= {lo}")
    return list(range(a, b + 1))


def _cone(cfg, obj) -> dict:
    from .cone import block_levels, cone_homology
    from .graph import fraction_str, with_framing
    from .spinc import spinc_classes

    m = _need_marked(obj)
    out = []
    for k in _k_values(cfg, m):
        for t in spinc_classes(with_framing(m, -k)):
            fam = block_levels(m, k, t)
            res = cone_homology(m, k, t, cfg.kind)
            out.append({"k": k, "spinc": t.to_dict(), "kind": res.kind, "i": fraction_str(fam.i0),
                        "alpha": fraction_str(fam.alpha), "window": list(res.window),
                        "blocks": [b.to_dict() for b in res.blocks], "homology": res.module.to_dict()})
    return {"cones": out}


def _verify(cfg, obj) -> dict:
    from .cone import verify_surgery

    m = _need_marked(obj)
    rows = []
    for k in _k_values(cfg, m):
        for chk in verify_surgery(m, k, cfg.kind):
            row = chk.to_dict()
            row["k"] = k
            rows.append(row)
    rep = {"checks": rows, "all_equal": all(r["equal"] and r["b_row"] for r in rows)}
    if not rep["all_equal"]:
        raise ConsistencyFailure("cone and direct homology differ", rep)
    return rep


def _default_vertex(g: PlumbingGraph) -> str:
    from .rational import is_rational

    for w in g.vertices:
        rest = g.subgraph(v for v in g.vertices if v != w)
        if len(rest) and all(is_rational(rest.subgraph(c), "laufer").rational for c in rest.components()):
            return w
    raise InputError("no vertex whose removal leaves rational components")


def _hfminus(cfg, obj) -> dict:
    from .cone import hf_via_cone

    g = _need_graph(obj)
    g.require_definite()
    w = cfg.vertex or _default_vertex(g)
    if w not in g.index:
        raise InputError(f"unknown vertex {w!r}")
    rows = [c.to_dict() for c in hf_via_cone(g, w, cfg.kind)]
    rep = {"vertex": w, "classes": rows, "all_equal": all(r["equal"] for r in rows)}
    if not rep["all_equal"]:
        raise ConsistencyFailure("cone and direct homology differ", rep)
    return rep


def _sum(cfg, obj) -> dict:
    from .fu import minimal_model, tensor
    from .knot import clean_model
    from .model import complexes_equiv
    from .spinc import spinc_classes

    if not (isinstance(obj, list) and len(obj) == 2):
        raise InputError("sum needs two marked graphs (a JSON list, or @a+b)")
    m1, m2 = (_need_marked(x) for x in obj)
    total = connected_sum(m1, m2)
    rows = []
    for s1 in spinc_classes(m1.graph):
        for s2 in spinc_classes(m2.graph):
            k = tuple(list(s1.representative) + list(s2.representative))
            # the sum graph lists the left vertices first, then the right ones
            from .spinc import class_of
            s = class_of(total.graph, k)
            left = clean_model(m1, s1).reduced
            right = clean_model(m2, s2).reduced
            prod = minimal_model(tensor(left, right))
            direct = clean_model(total, s).reduced
            rows.append({"left": s1.index, "right": s2.index, "sum": s.index,
                         "tensor_generators": len(prod.gens), "direct_generators": len(direct.gens),
                         "equivalent": complexes_equiv(prod, direct)})
    rep = {"graph": total.to_dict(), "classes": rows, "all_equivalent": all(r["equivalent"] for r in rows)}
    if not rep["all_equivalent"]:
        raise ConsistencyFailure("tensor product and direct knot complex differ", rep)
    return rep


def _selftest(cfg, obj) -> dict:
    from .acceptance import run_all

    results = run_all(seed=cfg.seed)
    rep = {"criteria": [r.to_dict() for r in results],
           "passed": all(r.as_expected for r in results)}
    if not rep["passed"]:
        raise ConsistencyFailure("self-test failed", rep)
    return rep


HANDLERS = {
    "rational": _rational, "homology": _homology, "dinv": _dinv, "delta": _delta,
    "lspace": _lspace, "knot": _knot, "model": _model, "cone": _cone, "verify": _verify,
    "hfminus": _hfminus, "sum": _sum, "selftest": _selftest,
}


def run(cfg: RunConfig) -> tuple[int, dict]:
    from .graph import NotNegativeDefinite

    try:
        obj = None if cfg.command == "selftest" else load_input(cfg)
        body = HANDLERS[cfg.command](cfg, obj)
        return EXIT_OK, {"command": cfg.command, "status": "ok", **body}
    except (InputError, GraphError, NotNegativeDefinite, KnotError) as exc:
        return EXIT_INPUT, {"command": cfg.command, "status": "input-error",
                            "error": type(exc).__name__, "message": str(exc)}
    except ConsistencyFailure as exc:
        return EXIT_CONSISTENCY, {"command": cfg.command, "status": "consistency-failure",
                                  "message": str(exc), "report": exc.report}
    except (StructureError, GradingError, TruncationError) as exc:
        doc = {"command": cfg.command, "status": "consistency-failure",
               "error": type(exc).__name__, "message": str(exc)}
        return EXIT_CONSISTENCY, doc


# --- rendering -----------------------------------------------------------------------

def _default(o):
    if isinstance(o, Fraction):
        return str(o.numerator) if o.denominator == 1 else f"{o.numerator}/{o.denominator}"
    if isinstance(o, (set, frozenset)):
        return sorted(o, key=repr)
    if isinstance(o, tuple):
        return list(o)
    if hasattr(o, "to_dict"):
        return o.to_dict()
    return str(o)


def render_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, default=_default, indent=1)


def _rows(doc, prefix=""):
    if isinstance(doc, dict):
        for k in sorted(doc):
            yield from _rows(doc[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(doc, list) and doc and all(isinstance(x, (dict, list)) for x in doc):
        for i, x in enumerate(doc):
            yield from _rows(x, f"{prefix}[{i}]")
    else:
        yield prefix, json.dumps(doc, sort_keys=True, default=_default)


def render_table(doc: dict) -> str:
    rows = list(_rows(json.loads(render_json(doc))))
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plumbo", description="Lattice homology of plumbing graphs.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", help="graph JSON file, or @fixture (@a+b for sum)")
    p.add_argument("--nmax", type=int, help="highest truncation level to try")
    p.add_argument("--k", dest="k", help="surgery range A..B")
    p.add_argument("--format", dest="fmt", default="json", choices=("json", "table"))
    p.add_argument("--seed", type=int, default=0, help="seed for the sampled self-test corpus")
    p.add_argument("--vertex", help="vertex whose framing the hfminus cone erases")
    p.add_argument("--kind", default="auto", choices=("auto", "homology", "chain"),
                   help="cone model: towers per block or reduced knot complexes")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = RunConfig(ns.command, ns.input, ns.nmax, parse_k(ns.k) if ns.k else None,
                        ns.fmt, ns.seed, ns.vertex, ns.kind)
    except InputError as exc:
        code, doc = EXIT_INPUT, {"command": ns.command, "status": "input-error",
                                 "error": "InputError", "message": str(exc)}
    else:
        code, doc = run(cfg)
    text = render_table(doc) if ns.fmt == "table" else render_json(doc)
    sys.stdout.write(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
