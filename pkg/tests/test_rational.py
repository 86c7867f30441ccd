import pytest

from plumbo.fixtures import a_chain, chain, corpus, e8, sigma237, star
from plumbo.graph import NotNegativeDefinite, PlumbingGraph
from plumbo.rational import artin_cycle, geometric_genus, is_almost_rational, is_rational


def test_trefoil_star_artin_cycle():
    # minimal Z with Z.E_v <= 0: the centre needs 2, the legs 1
    g = star(-1, [-2, -3])
    assert dict(zip(g.vertices, artin_cycle(g))) == {"c": 2, "p": 1, "q": 1}
    assert is_rational(g).rational


def test_e8_artin_cycle_is_the_highest_root():
    g = e8()
    z = dict(zip(g.vertices, artin_cycle(g)))
    assert z == {"v0": 2, "v1": 4, "v2": 6, "v3": 5, "v4": 4, "v5": 3, "v6": 2, "v7": 3}
    assert g.pair(list(artin_cycle(g)), list(artin_cycle(g))) == -2
    assert is_rational(g).rational


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_a_chains_rational(n):
    g = a_chain(n)
    assert artin_cycle(g) == (1,) * n
    assert geometric_genus(g, artin_cycle(g)) == 0
    assert is_rational(g).rational


def test_sigma237_not_rational():
    g = sigma237()
    z = artin_cycle(g)
    # by hand: Z.E = (0, 0, 0, -1) on (c, p, q, r), so Z^2 = -1 while K.Z = 1
    assert dict(zip(g.vertices, z)) == {"c": 6, "p": 3, "q": 2, "r": 1}
    assert geometric_genus(g, z) == 1
    assert not is_rational(g).rational


def test_sigma237_almost_rational():
    w, m = is_almost_rational(sigma237())
    assert w == "c"
    assert is_rational(sigma237().with_framings({w: m})).rational


def test_laufer_and_genus_agree_on_corpus():
    small = corpus(max_vertices=3)
    assert len(small) > 40
    for g in small:
        assert is_rational(g, "laufer").rational == is_rational(g, "genus").rational


def test_disconnected_graph_is_rational_per_component():
    g = PlumbingGraph.build({"a": -2, "b": -3})
    r = is_rational(g)
    assert r.rational and len(r.per_component) == 2


def test_indefinite_rejected():
    with pytest.raises(NotNegativeDefinite):
        is_rational(chain([-1, -1]))


def test_corpus_is_deduplicated_and_definite():
    graphs = corpus()
    assert len(graphs) == 209
    assert len(set(graphs)) == len(graphs)
    assert all(g.is_negative_definite and len(g.components()) == 1 for g in graphs)


def test_type_two_is_not_almost_rational():
    from plumbo.fixtures import type_two

    g = type_two()
    assert not is_rational(g).rational
    assert is_almost_rational(g) is None
    # rational graphs count as almost rational
    assert is_almost_rational(a_chain(3)) is not None
