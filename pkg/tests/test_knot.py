import pytest

from plumbo.fixtures import trefoil, trefoil_sum, unknot
from plumbo.fu import GradedModule, homology, minimal_model
from plumbo.knot import (alexander_grading, build_bifiltered, hypothesis_holds, min_definite_k,
                         predicted_ab_difference, sigma_class, staircase_data)
from plumbo.spinc import spinc_classes


def torsion_coefficients(alexander: dict[int, int], genus: int) -> dict[int, int]:
    """V_i of an L-space knot read off its symmetrised Alexander polynomial."""
    v = {}
    for i in range(0, genus + 6):
        v[i] = sum(j * alexander.get(i + j, 0) for j in range(1, genus + 2))
    for i in range(1, genus + 6):
        v[-i] = v[i] + i
    return v


UNKNOT_V = torsion_coefficients({0: 1}, 0)
TREFOIL_V = torsion_coefficients({1: 1, 0: -1, -1: 1}, 1)
# the connected sum has the V_i of the (2,5) torus knot
SUM_V = torsion_coefficients({2: 1, 1: -1, 0: 1, -1: -1, -2: 1}, 2)


def only_class(m):
    (s,) = spinc_classes(m.graph)
    return s


def test_sigma_class_and_definite_range():
    u, t = sigma_class(unknot()), sigma_class(trefoil())
    assert u.a == (1,) and u.an == 1
    assert t.an == 6
    assert min_definite_k(unknot()) == 2
    assert min_definite_k(trefoil()) == 7
    assert min_definite_k(trefoil_sum()) == 13


def test_hypothesis():
    assert hypothesis_holds(unknot()) and hypothesis_holds(trefoil())
    assert not hypothesis_holds(trefoil_sum())


def test_alexander_grading_rejects_foreign_vector():
    m = trefoil()
    s = only_class(m)
    # the vertex-free cube sits at level (K(Sigma - v0) + an) / 2; here K(Sigma - v0) = -4
    assert alexander_grading(m, s, s.representative, []) == 1
    with pytest.raises(ValueError):
        alexander_grading(m, s, (0, 0, 0), [])


@pytest.mark.parametrize("mark, v", [(unknot, UNKNOT_V), (trefoil, TREFOIL_V)])
def test_staircase_matches_torsion_coefficients(mark, v):
    m = mark()
    sd = staircase_data(m, only_class(m))
    assert sd.q == 0 and not sd.violations and sd.lspace_type and sd.symmetric
    for i in range(-4, 5):
        a, b, _ = sd.at(i)
        assert (a, b) == (v[i], v[-i]), i
        assert a - b == -i


def test_trefoil_frozen_values():
    m = trefoil()
    sd = staircase_data(m, only_class(m))
    assert [lv.a for lv in sd.levels] == [2, 1, 1, 0, 0]
    assert [lv.b for lv in sd.levels] == [0, 0, 1, 1, 2]
    assert [lv.d for lv in sd.levels] == [1, 0, 1, 0, 0]
    assert sd.jumps == [1, 0, -1]
    assert sd.window() == (-2, 2)


def test_d_is_the_drop_in_a():
    m = trefoil()
    sd = staircase_data(m, only_class(m))
    for i in range(-5, 5):
        assert sd.at(i)[2] == sd.at(i)[0] - sd.at(i + 1)[0]


@pytest.mark.parametrize("mark", [unknot, trefoil])
def test_predicted_difference(mark):
    m = mark()
    s = only_class(m)
    for lv in staircase_data(m, s).levels:
        assert predicted_ab_difference(m, s, lv.i) == lv.a - lv.b


def test_reduced_trefoil_complex():
    m = trefoil()
    full = build_bifiltered(m, only_class(m))
    b = minimal_model(full)
    b.check()
    assert b.is_minimal() and not full.is_minimal()
    assert homology(full.complex) == homology(b.complex)
    assert homology(b.complex) == GradedModule.make([0])
    assert sorted(b.alexander.values()) == [-1, 0, 1]


def test_unknot_reduced_complex_is_a_tower():
    m = unknot()
    b = minimal_model(build_bifiltered(m, only_class(m)))
    assert len(b.gens) == 1
    assert list(b.alexander.values()) == [0]


@pytest.mark.slow
def test_trefoil_sum_staircase():
    m = trefoil_sum()
    sd = staircase_data(m, only_class(m))
    for i in range(-4, 5):
        a, b, _ = sd.at(i)
        assert (a, b) == (SUM_V[i], SUM_V[-i]), i
    assert sd.jumps == [2, 1, 0, -1, -2]
    # A_0 carries an extra F at the tower's grading, so the knot is not of L-space type
    lv0 = next(lv for lv in sd.levels if lv.i == 0)
    assert lv0.module == GradedModule.make([-2], [(-2, 1)])
    assert not sd.lspace_type and sd.violations
