from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from plumbo import fixtures as F
from plumbo.fu import GradedModule, homology, minimal_model, tensor
from plumbo.knot import clean_model, staircase_data
from plumbo.model import (ModelComplex, ModelError, complexes_equiv, extract_model, finite_staircase,
                          model_equiv, realize_model, same_levels, same_staircase)
from plumbo.spinc import spinc_classes

odd = st.integers(0, 3).map(lambda j: 2 * j + 1)


@st.composite
def models(draw):
    n = draw(st.integers(0, 3))
    top = draw(st.integers(-4, 4)) + draw(st.sampled_from([Fraction(0), Fraction(1, 2)]))
    q = Fraction(draw(st.integers(-6, 6)), draw(st.sampled_from([1, 4])))
    betas, alphas = [top], []
    for _ in range(n):
        alphas.append(betas[-1] - draw(odd))
        betas.append(alphas[-1] - draw(odd))
    return ModelComplex.make(q, alphas, betas)


def test_known_models():
    assert ModelComplex.make(0, [], [0]).violations() == []
    assert ModelComplex.make(0, [0], [1, -1]).violations() == []
    assert ModelComplex.make(0, [0], [1, -2]).violations()  # parity of betas
    assert ModelComplex.make(0, [1], [1, -1]).violations()  # interleaving
    assert ModelComplex.make(0, [0], [2]).violations()
    with pytest.raises(ModelError):
        realize_model(ModelComplex.make(0, [1], [1, -1]))


def test_trefoil_model_shape():
    b = realize_model(ModelComplex.make(0, [0], [1, -1]))
    assert b.gens == ["y1", "x1", "y2"]
    assert b.complex.grading == {"y1": 0, "x1": -1, "y2": -2}
    assert homology(b.complex) == GradedModule.make([0])


@given(models())
def test_dict_round_trip(m):
    assert ModelComplex.from_dict(m.to_dict()) == m


@given(models())
def test_realize_extract_round_trip(m):
    b = realize_model(m)
    assert b.is_minimal()
    assert len(b.gens) == 2 * m.n + 1
    assert homology(b.complex) == GradedModule.make([m.q])
    data = finite_staircase(b)
    assert data.lspace_type and not data.violations
    assert extract_model(data) == m
    assert model_equiv(b, m)


@given(models(), models())
def test_distinct_models_are_not_equivalent(m1, m2):
    if m1 != m2:
        assert not model_equiv(realize_model(m1), m2)


def test_bad_documents():
    with pytest.raises(ModelError):
        ModelComplex.from_dict({"q": "0"})
    with pytest.raises(ModelError):
        ModelComplex.from_dict({"q": "x", "alphas": [], "betas": ["0"]})


def _reduced(mark):
    m = mark()
    (s,) = spinc_classes(m.graph)
    sd = staircase_data(m, s)
    return sd, clean_model(m, s).reduced


def test_lattice_models():
    sd, red = _reduced(F.unknot)
    assert extract_model(sd) == ModelComplex.make(0, [], [0])
    sd, red = _reduced(F.trefoil)
    m = extract_model(sd)
    assert m == ModelComplex.make(0, [0], [1, -1])
    assert model_equiv(red, m)
    assert not model_equiv(red, ModelComplex.make(0, [], [0]))


def test_staircase_comparisons():
    t = finite_staircase(realize_model(ModelComplex.make(0, [0], [1, -1])))
    u = finite_staircase(realize_model(ModelComplex.make(0, [], [0])))
    assert same_staircase(t, t) and same_levels(t, t)
    assert not same_staircase(t, u)


def test_tensor_of_trefoil_models():
    tm = realize_model(ModelComplex.make(0, [0], [1, -1]))
    prod = tensor(tm, tm)
    data = finite_staircase(prod)
    # the square of the trefoil staircase carries an extra F in A_0
    assert not data.lspace_type
    assert sorted(data.jumps, reverse=True) == [2, 1, 0, -1, -2]
    with pytest.raises(ModelError, match="L-space"):
        model_equiv(prod, ModelComplex.make(0, [1, -1], [2, 0, -2]))
    assert len(minimal_model(prod).gens) == 9
    assert complexes_equiv(prod, tensor(tm, realize_model(ModelComplex.make(0, [0], [1, -1]))))


@pytest.mark.slow
def test_tensor_matches_lattice_sum():
    tm = realize_model(ModelComplex.make(0, [0], [1, -1]))
    prod = tensor(tm, tm)
    sd, red = _reduced(F.trefoil_sum)
    assert complexes_equiv(prod, red)
    assert same_levels(finite_staircase(prod), sd)
