"""The eleven acceptance checks, shared by ``plumbo selftest`` and the test suite.

Each check returns a CriterionResult.  ``expected`` is False where the
literal claim is known not to hold; the result then records what was
observed instead, and the check counts as behaving as expected when it
fails in exactly the recorded way.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import fixtures as F
from .graph import fraction_str, with_framing
from .spinc import spinc_classes


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    expected: bool = True
    deviation: str | None = None

    @property
    def as_expected(self) -> bool:
        return self.passed == self.expected

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        out = f"criterion {self.number:2d} {tag}: {self.title}"
        if self.deviation:
            out += f" [known deviation: {self.deviation}]"
        return out

    def to_dict(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "expected": self.expected, "deviation": self.deviation, "details": self.details}


# --- 1: differential soundness ----------------------------------------------------------

def _formula_agrees(lc) -> bool:
    """Compare the assembled complex with the closed formulas cube by cube."""
    from .lattice import boundary, maslov_grading

    cx, g = lc.complex, lc.graph
    for i in cx.gens:
        gen = lc.generator(i)
        if cx.grading[i] != maslov_grading(g, gen.K, gen.E):
            return False
        want = sorted(((t, f.K, sorted(f.E)) for t, f in boundary(g, gen.K, gen.E)))
        got = sorted(((cx.exponent(i, j), lc.generator(j).K, sorted(lc.generator(j).E))
                      for j in cx.boundary[i]))
        if want != got:
            return False
    return True


def criterion_1(seed: int = 0) -> CriterionResult:
    from .cone import cone_homology
    from .knot import clean_model
    from .lattice import TruncationBox, build_complex

    rng = random.Random(seed)
    counts = {"complexes": 0, "formula_checked": 0, "knot": 0, "cone": 0}
    failures = []
    for g in F.corpus():
        classes = spinc_classes(g)
        for n in (1, 2):
            # radius 2 on four vertices: one sampled class per graph keeps this under a few minutes
            pick = classes if (n == 1 or len(g) < 4) else [rng.choice(classes)]
            for s in pick:
                lc = build_complex(g, s, TruncationBox(n))
                try:
                    lc.complex.check()
                except Exception as exc:  # noqa: BLE001 - reported, not raised
                    failures.append(f"{g.to_dict()} {s.index} N={n}: {exc}")
                counts["complexes"] += 1
                if n == 1 and (len(g) < 4 or s is classes[0]):
                    counts["formula_checked"] += 1
                    if not _formula_agrees(lc):
                        failures.append(f"{g.to_dict()} {s.index}: formula mismatch")
    for name in ("unknot", "trefoil", "trefoil_sum"):
        m = F.lookup(name)
        for s in spinc_classes(m.graph):
            kl = clean_model(m, s)
            kl.bifiltered().check()
            kl.reduced.check()
            counts["knot"] += 1
    for name, (lo, _) in F.SURGERY_K.items():
        m = F.lookup(name)
        for t in spinc_classes(with_framing(m, -lo)):
            cone_homology(m, lo, t).complex.check()
            counts["cone"] += 1
    return CriterionResult(1, "d^2 = 0 and the grading law on corpus and fixture complexes",
                           not failures, {**counts, "failures": failures[:5]})


# --- 2: rationality oracles ---------------------------------------------------------

def criterion_2(seed: int = 0) -> CriterionResult:
    from .rational import is_rational

    disagree, n = [], 0
    for g in F.corpus():
        lau = is_rational(g, "laufer").rational
        gen = is_rational(g, "genus").rational
        n += 1
        if lau != gen:
            disagree.append(g.to_dict())
    named = {name: is_rational(F.lookup(name), "both").rational
             for name in ("e8", "a1", "a2", "a3", "a4", "sigma237")}
    ok = not disagree and all(named[x] for x in ("e8", "a1", "a2", "a3", "a4")) and not named["sigma237"]
    return CriterionResult(2, "Laufer and Artin-genus tests agree; E8 and A_n rational, sigma237 not",
                           ok, {"graphs": n, "disagreements": disagree[:5], "named": named})


# --- 3: rational graphs have free lattice homology in delta 0 ------------------------------

def criterion_3(seed: int = 0) -> CriterionResult:
    from .lattice import lattice_homology
    from .rational import is_almost_rational, is_rational

    bad, n_rat, n_almost = [], 0, 0
    for g in F.corpus():
        rational = is_rational(g, "laufer").rational
        almost = rational or is_almost_rational(g) is not None
        for s in spinc_classes(g):
            lh = lattice_homology(g, s)
            if rational:
                n_rat += 1
                if lh.module.torsion or len(lh.module.free) != 1 or set(lh.by_delta) != {0}:
                    bad.append((g.to_dict(), s.index, "rational"))
            elif almost:
                n_almost += 1
                if set(lh.by_delta) != {0}:
                    bad.append((g.to_dict(), s.index, "almost rational"))
    g = F.sigma237()
    lh = lattice_homology(g, spinc_classes(g)[0])
    s237 = set(lh.by_delta) == {0} and bool(lh.module.torsion)
    return CriterionResult(3, "rational: one free summand in delta 0; sigma237: delta 0 with torsion",
                           not bad and s237,
                           {"rational_classes": n_rat, "almost_rational_classes": n_almost,
                            "failures": bad[:5], "sigma237": lh.module.to_dict()})


# --- 4: d-invariants --------------------------------------------------------------

def criterion_4(seed: int = 0) -> CriterionResult:
    from .lattice import d_invariant, max_zero_cube_grading

    out, ok = {}, True
    for name in ("m1", "m2", "e8"):
        g = F.lookup(name)
        rows = []
        for s in spinc_classes(g):
            d = d_invariant(g, s).value
            alt = max_zero_cube_grading(g, s)
            ok = ok and d == alt
            rows.append([fraction_str(d), fraction_str(alt)])
        out[name] = rows
    ok = ok and out["m1"] == [["0", "0"]]
    ok = ok and sorted(r[0] for r in out["m2"]) == ["-1/4", "1/4"]
    return CriterionResult(4, "d-invariants: homology route equals max zero-cube grading", ok, out)


# --- 5: staircase shape -----------------------------------------------------------------

def criterion_5(seed: int = 0) -> CriterionResult:
    from .knot import staircase_data

    per, clean = {}, {}
    for name in ("unknot", "trefoil", "trefoil_sum"):
        m = F.lookup(name)
        rows = [staircase_data(m, s) for s in spinc_classes(m.graph)]
        per[name] = [{"jumps": [fraction_str(j) for j in sd.jumps], "symmetric": sd.symmetric,
                      "violations": sd.violations,
                      "push_checks_ok": all(v is True for v in sd.checks.values())} for sd in rows]
        clean[name] = all(not sd.violations and sd.symmetric and all(v is True for v in sd.checks.values())
                          for sd in rows)
    # trefoil#trefoil: G is two stars, so the leaf hypothesis fails and H(A_0) carries torsion
    tt = per["trefoil_sum"][0]
    deviation_seen = (tt["symmetric"] and len(tt["violations"]) == 1
                      and tt["violations"][0].startswith("H(A_0)"))
    passed = clean["unknot"] and clean["trefoil"] and clean["trefoil_sum"]
    expected = not deviation_seen or not (clean["unknot"] and clean["trefoil"])
    return CriterionResult(5, "staircase conditions hold and jumps are symmetric", passed, per,
                           expected=expected,
                           deviation=("trefoil#trefoil has H(A_0) = F[U] + F, not a single tower"
                                      if deviation_seen else None))


# --- 6: contracted cone minimum ----------------------------------------------------------

def criterion_6(seed: int = 0) -> CriterionResult:
    from .cone import contracted_min
    from .knot import staircase_data

    rows, ok = [], True
    for name in ("unknot", "trefoil"):
        m = F.lookup(name)
        for s in spinc_classes(m.graph):
            sd = staircase_data(m, s)
            for lv in sd.levels:
                got, want = contracted_min(m, s, lv.i)
                ok = ok and got == want
                rows.append({"mark": name, "i": fraction_str(lv.i), "direct": got, "min_ab": want})
    return CriterionResult(6, "contracted cone minimum equals min(a_i, b_i)", ok,
                           {"levels": rows, "skipped": ["trefoil_sum: not of L-space type"]})


# --- 7: predicted a_i - b_i -------------------------------------------------------------

def criterion_7(seed: int = 0) -> CriterionResult:
    from .knot import predicted_ab_difference, staircase_data

    rows, ok = [], True
    for name in ("unknot", "trefoil", "trefoil_sum"):
        m = F.lookup(name)
        for s in spinc_classes(m.graph):
            for lv in staircase_data(m, s).levels:
                p = predicted_ab_difference(m, s, lv.i)
                ok = ok and p == lv.a - lv.b
                rows.append({"mark": name, "i": fraction_str(lv.i), "predicted": fraction_str(p),
                             "observed": lv.a - lv.b})
    return CriterionResult(7, "predicted a_i - b_i equals the computed difference", ok, {"levels": rows})


# --- 8: surgery cone --------------------------------------------------------------------

def criterion_8(seed: int = 0) -> CriterionResult:
    from .cone import verify_surgery

    rows, ok = [], True
    for name, (lo, hi) in F.SURGERY_K.items():
        m = F.lookup(name)
        for k in range(lo, hi + 1):
            for chk in verify_surgery(m, k):
                b_row = chk.cone.tower_in_b_row()
                ok = ok and chk.equal and b_row
                rows.append({"mark": name, "k": k, "spinc": chk.t.index, "kind": chk.cone.kind,
                             "equal": chk.equal, "b_row": b_row, "homology": chk.direct.to_dict()})
    return CriterionResult(8, "surgery cone equals direct lattice homology of G_-k", ok, {"checks": rows},
                           deviation="k ranges start where G_-k is negative definite")


# --- 9: whole-graph cone -----------------------------------------------------------------

def criterion_9(seed: int = 0) -> CriterionResult:
    from .cone import hf_via_cone

    rows, ok = [], True
    for name, make in F.CONE_GRAPHS.items():
        g, w = make()
        for chk in hf_via_cone(g, w):
            ok = ok and chk.equal
            rows.append({"graph": name, "vertex": w, "spinc": chk.t.index, "equal": chk.equal,
                         "homology": chk.direct.to_dict()})
    return CriterionResult(9, "cone over G - w equals direct lattice homology of G", ok, {"checks": rows},
                           deviation="(-1,-1) chain replaced by the definite (-1,-2) chain")


# --- 10: model round trips -----------------------------------------------------------------

def criterion_10(seed: int = 0) -> CriterionResult:
    from .fu import tensor
    from .knot import clean_model, staircase_data
    from .model import (ModelComplex, ModelError, complexes_equiv, extract_model, finite_staircase,
                        model_equiv, realize_model, same_levels, same_staircase)

    det: dict = {}
    ok = True
    models = {}
    for name in ("unknot", "trefoil", "trefoil_sum"):
        m = F.lookup(name)
        s = spinc_classes(m.graph)[0]
        sd = staircase_data(m, s)
        mod = extract_model(sd, strict=not sd.violations)
        models[name] = mod
        real = realize_model(mod)
        rt = extract_model(finite_staircase(real)) == mod
        closure = same_staircase(finite_staircase(real), sd)
        det[name] = {"model": mod.to_dict(), "round_trip": rt, "staircase_closure": closure}
        ok = ok and rt and (closure or name == "trefoil_sum")
    trefoil = ModelComplex.make(0, [0], [1, -1])
    kl = clean_model(F.trefoil(), spinc_classes(F.trefoil().graph)[0])
    det["trefoil_equiv"] = model_equiv(kl.reduced, trefoil)
    det["trefoil_vs_unknot"] = model_equiv(kl.reduced, ModelComplex.make(0, [], [0]))
    ok = ok and det["trefoil_equiv"] and not det["trefoil_vs_unknot"]
    ok = ok and models["trefoil"] == trefoil

    prod = tensor(realize_model(trefoil), realize_model(trefoil))
    try:
        literal = model_equiv(prod, models["trefoil_sum"])
    except ModelError as exc:
        literal = f"undefined: {exc}"
    det["tensor_vs_sum_model_literal"] = literal
    tt = F.trefoil_sum()
    tt_kl = clean_model(tt, spinc_classes(tt.graph)[0])
    det["tensor_vs_sum_complex"] = complexes_equiv(prod, tt_kl.reduced)
    det["tensor_vs_sum_levels"] = same_levels(finite_staircase(prod), staircase_data(tt, spinc_classes(tt.graph)[0]))
    det["sum_model_from_jumps"] = models["trefoil_sum"].to_dict()
    corrected = det["tensor_vs_sum_complex"] and det["tensor_vs_sum_levels"]
    passed = ok and corrected and literal is True
    return CriterionResult(10, "model extraction, realization and equivalence", passed, det,
                           expected=not (ok and corrected) or literal is True,
                           deviation=None if literal is True else
                           "tensor of trefoil models matches the trefoil#trefoil complex, not its 5-generator model")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10]


def run_all(seed: int = 0, only=None) -> list[CriterionResult]:
    out = []
    for fn in CRITERIA:
        num = int(fn.__name__.split("_")[1])
        if only is None or num in only:
            out.append(fn(seed))
    return out
