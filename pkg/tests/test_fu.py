from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from plumbo.fixtures import chain, sigma237, star
from plumbo.fu import (BifilteredComplex, ChainMap, GradedFreeComplex, GradedModule, GradingError,
                       StructureError, UPoly, homology, homology_with_cycles, induced_power, is_boundary,
                       minimal_model, solve_f2, tensor, tower_cocycle, unit_complex)
from plumbo.lattice import TruncationBox, WeightTruncation, build_complex
from plumbo.spinc import spinc_classes


# --- oracle: F2-ranks degree by degree ------------------------------------

def _rank(rows):
    basis = {}
    r = 0
    for v in rows:
        while v:
            p = v.bit_length() - 1
            if p in basis:
                v ^= basis[p]
            else:
                basis[p] = v
                r += 1
                break
    return r


def _degree_basis(c, h):
    return [(x, (c.grading[x] - h) // 2) for x in c.gens
            if c.grading[x] >= h and (c.grading[x] - h) % 2 == 0]


def _d_rank(c, h):
    """Rank of d from degree h to degree h - 1."""
    src = _degree_basis(c, h)
    pos = {b: i for i, b in enumerate(_degree_basis(c, h - 1))}
    rows = []
    for x, j in src:
        v = 0
        for y in c.boundary[x]:
            v ^= 1 << pos[(y, j + c.exponent(x, y))]
        rows.append(v)
    return _rank(rows)


def rank_oracle(c, h):
    return len(_degree_basis(c, h)) - _d_rank(c, h) - _d_rank(c, h + 1)


def assert_matches_oracle(c, module):
    top = max(c.grading.values())
    low = min(c.grading.values()) - 4
    h = top
    while h >= low:
        assert module.rank_in_degree(h) == rank_oracle(c, h), h
        h -= 1


# --- UPoly -----------------------------------------------------------------

polys = st.integers(0, 2 ** 12).map(UPoly)


@given(polys, polys, polys)
def test_upoly_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + a == UPoly()


@given(polys, polys.filter(bool))
def test_upoly_division(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert not r or r.degree < b.degree


def test_upoly_basics():
    p = UPoly.from_exponents([0, 3, 3, 5])
    assert p.exponents() == [0, 5]
    assert p.degree == 5 and p.valuation == 0
    assert UPoly.monomial(2) * UPoly.monomial(3) == UPoly.monomial(5)
    assert repr(UPoly.from_exponents([0, 1, 4])) == "1 + U + U^4"
    x1 = UPoly.from_exponents([0, 1])
    assert (x1 * x1).gcd(x1 * UPoly.monomial(3)) == x1


# --- complexes and modules ---------------------------------------------------

def test_grading_law_enforced():
    with pytest.raises(GradingError):
        GradedFreeComplex.from_entries(["x", "y"], {"x": 0, "y": 0}, [("x", 0, "y")])
    c = GradedFreeComplex(["x", "y"], {"x": 1, "y": Fraction(1, 2)}, {"x": {"y"}})
    with pytest.raises(GradingError):
        c.check()
    bad = GradedFreeComplex(["a", "b", "c"], {"a": 2, "b": 1, "c": 0}, {"a": {"b"}, "b": {"c"}})
    with pytest.raises(StructureError):
        bad.check()


def test_homology_by_hand():
    # d x = U y with gr y = 0: F[U]/U at 0
    c = GradedFreeComplex.from_entries(["x", "y"], {"x": -1, "y": 0}, [("x", 1, "y")])
    assert homology(c) == GradedModule.make([], [(0, 1)])
    # acyclic pair plus a tower at 2
    c = GradedFreeComplex.from_entries(["a", "b", "t"], {"a": 1, "b": 0, "t": 2}, [("a", 0, "b")])
    assert homology(c) == GradedModule.make([2])
    # staircase a -> U b1 + U^2 b2 ... here: two generators hit one: d p = U q1 + q2
    c = GradedFreeComplex.from_entries(["p", "q1", "q2"], {"p": -1, "q1": 0, "q2": -2},
                                       [("p", 1, "q1"), ("p", 0, "q2")])
    assert homology(c) == GradedModule.make([0])


def test_module_ranks():
    m = GradedModule.make([Fraction(1, 2)], [(0, 2), (-1, 1)])
    assert [m.rank_in_degree(h) for h in (Fraction(1, 2), Fraction(-3, 2))] == [1, 1]
    assert [m.rank_in_degree(h) for h in (0, -1, -2, -3)] == [1, 1, 1, 0]
    assert m.shifted(1).free == (Fraction(3, 2),)
    assert m.to_dict() == {"free": ["1/2"], "torsion": [["0", 2], ["-1", 1]]}


LATTICE_CASES = [(chain([-2, -2]), 2), (star(-2, [-2, -2, -2]), 1), (sigma237(), 3), (chain([-3, -1, -4]), 2)]


@pytest.mark.parametrize("g, level", LATTICE_CASES, ids=lambda v: str(v))
def test_homology_matches_degreewise_ranks(g, level):
    for s in spinc_classes(g)[:3]:
        cx = build_complex(g, s, WeightTruncation(level)).complex
        cx.check()
        assert_matches_oracle(cx, homology(cx))


def test_box_truncation_matches_oracle():
    g = chain([-2, -3])
    cx = build_complex(g, spinc_classes(g)[0], TruncationBox(1)).complex
    assert_matches_oracle(cx, homology(cx))


def test_free_cycles_are_cycles_and_not_boundaries():
    g = sigma237()
    cx = build_complex(g, spinc_classes(g)[0], WeightTruncation(3)).complex
    res = homology_with_cycles(cx)
    for deg, z in res.free_cycles:
        acc = set()
        for y in z:
            acc ^= cx.boundary[y]
        assert not acc
        assert not is_boundary(cx, z, deg)


def test_is_boundary_by_hand():
    c = GradedFreeComplex.from_entries(["x", "y"], {"x": -1, "y": 0}, [("x", 1, "y")])
    assert not is_boundary(c, {"y"}, 0)
    assert is_boundary(c, {"y"}, -2)  # U y = d x
    assert is_boundary(c, set(), 0)


# --- linear algebra over F2 ----------------------------------------------------

@given(st.integers(1, 6).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, 2 ** n - 1), st.integers(0, 1)), max_size=8))))
def test_solve_f2_against_brute_force(case):
    n, rows = case
    sol = solve_f2(rows, n)

    def ok(x):
        return all(bin(m & x).count("1") % 2 == r for m, r in rows)

    exists = any(ok(x) for x in range(2 ** n))
    assert (sol is not None) == exists
    if sol is not None:
        assert ok(sol)


def test_tower_cocycle_detects_the_tower():
    g = sigma237()
    cx = build_complex(g, spinc_classes(g)[0], WeightTruncation(3)).complex
    res = homology_with_cycles(cx)
    q, z = res.free_cycles[0]
    phi = tower_cocycle(cx, q, z)
    assert len(phi & z) % 2 == 1
    # phi vanishes on every boundary: d^T phi = 0
    for x in cx.gens:
        assert len(cx.boundary[x] & phi) % 2 == 0


def test_induced_power_of_multiplication():
    a = GradedFreeComplex(["x"], {"x": 0}, {})
    b = GradedFreeComplex(["y"], {"y": 4}, {})
    f = ChainMap(a, b, {"x": frozenset({"y"})})
    f.check()
    assert induced_power(f) == 2


# --- bifiltered --------------------------------------------------------------

def trefoil_model():
    # d b = U a + c with Alexander gradings (1, 0, -1): the staircase of step 1
    cx = GradedFreeComplex.from_entries(["a", "b", "c"], {"a": 0, "b": -1, "c": -2},
                                        [("b", 1, "a"), ("b", 0, "c")])
    return BifilteredComplex(cx, {"a": 1, "b": 0, "c": -1})


def test_bifiltered_check_and_minimal():
    b = trefoil_model()
    b.check()
    assert b.is_minimal()
    assert homology(b.complex) == GradedModule.make([0])
    bad = BifilteredComplex(b.complex, {"a": 1, "b": -1, "c": -1})
    with pytest.raises(GradingError):
        bad.check()


def test_minimal_model_cancels_same_level_units():
    cx = GradedFreeComplex.from_entries(["u", "v", "w"], {"u": 1, "v": 0, "w": 4}, [("u", 0, "v")])
    b = BifilteredComplex(cx, {"u": 0, "v": 0, "w": 2})
    m = minimal_model(b)
    assert m.gens == ["w"] and m.is_minimal()


def test_tensor_with_unit_and_homology():
    b = trefoil_model()
    assert tensor(b, unit_complex()).signature() == b.signature()
    t = tensor(b, b)
    t.check()
    assert len(t.gens) == 9
    assert homology(t.complex) == GradedModule.make([0])
    m = minimal_model(t)
    assert homology(m.complex) == homology(t.complex)
    assert_matches_oracle(t.complex, homology(t.complex))


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-2, 2)), min_size=1, max_size=3))
def test_tensor_of_towers_is_a_tower(shifts):
    acc = unit_complex()
    for gr, alex in shifts:
        one = BifilteredComplex(GradedFreeComplex([0], {0: Fraction(2 * gr)}, {}), {0: alex})
        acc = tensor(acc, one)
    assert homology(acc.complex) == GradedModule.make([2 * sum(g for g, _ in shifts)])
