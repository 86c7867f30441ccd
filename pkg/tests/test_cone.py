from fractions import Fraction
from functools import lru_cache

import pytest

from plumbo import fixtures as F
from plumbo.cone import ConeError, block_levels, cone_homology, contracted_min, hf_via_cone, verify_surgery
from plumbo.fu import GradedModule
from plumbo.graph import MarkedGraph, with_framing
from plumbo.knot import sigma_class, staircase_data
from plumbo.spinc import spinc_classes, twist


@lru_cache(maxsize=None)
def d_lens(p, q, i):
    if p == 1:
        return Fraction(0)
    return Fraction(-1, 4) + Fraction((2 * i + 1 - p - q) ** 2, 4 * p * q) - d_lens(q, p % q, i % q)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
@pytest.mark.parametrize("kind", ["homology", "chain"])
def test_unknot_cone_gives_lens_space(k, kind):
    # -k framing on v0 next to a -1 vertex blows down to a single -(k-1) vertex
    checks = verify_surgery(F.unknot(), k, kind)
    got = sorted(c.cone.module.free[0] for c in checks)
    assert all(c.cone.module.is_tower for c in checks)
    assert got == sorted(-d_lens(k - 1, 1, i) for i in range(k - 1))
    assert all(c.equal and c.cone.tower_in_b_row() for c in checks)


@pytest.mark.parametrize("k", [7, 8, 9, 10])
@pytest.mark.parametrize("kind", ["homology", "chain"])
def test_trefoil_cone_matches_direct(k, kind):
    checks = verify_surgery(F.trefoil(), k, kind)
    assert len(checks) == k - 6
    assert all(c.equal and c.cone.tower_in_b_row() for c in checks)


def test_trefoil_minus_one_surgery_is_sigma237():
    (c,) = verify_surgery(F.trefoil(), 7)
    assert c.cone.module == GradedModule.make([0], [(0, 1)])


def test_block_family_progression():
    m = F.trefoil()
    k = 9
    big = with_framing(m, -k)
    alpha = sigma_class(m).square(k)
    assert alpha == -3
    for t in spinc_classes(big):
        fam = block_levels(m, k, t)
        assert fam.alpha == alpha
        for n in range(-3, 4):
            b = fam.block(n)
            assert b.level == fam.i0 + n * alpha
            assert b.s == twist(fam.s0, m, n)


def test_block_levels_rejects_foreign_class():
    m = F.trefoil()
    other = spinc_classes(with_framing(m, -8))[0]
    with pytest.raises(ConeError):
        block_levels(m, 9, other)


def test_auto_kind_follows_hypothesis():
    t = spinc_classes(with_framing(F.trefoil(), -7))[0]
    assert cone_homology(F.trefoil(), 7, t).kind == "homology"


@pytest.mark.parametrize("mark", [F.unknot, F.trefoil])
def test_contracted_min(mark):
    m = mark()
    (s,) = spinc_classes(m.graph)
    sd = staircase_data(m, s)
    for i in range(-2, 3):
        direct, from_staircase = contracted_min(m, s, i)
        a, b, _ = sd.at(i)
        assert direct == from_staircase == min(a, b)


def test_hf_via_cone_fixtures():
    g, w = F.short_chain()
    (c,) = hf_via_cone(g, w)
    assert c.equal and c.direct == GradedModule.make([0])
    g, w = F.completed_trefoil()
    (c,) = hf_via_cone(g, w)
    assert c.equal and c.direct == GradedModule.make([0], [(0, 1)])


def test_hf_via_cone_needs_rational_complement():
    # sigma237 with a -2 vertex hung on its -7 leg; removing that vertex leaves sigma237
    g = with_framing(MarkedGraph(F.sigma237(), "w", frozenset({"r"})), -2)
    with pytest.raises(ConeError, match="not rational"):
        hf_via_cone(g, "w")


@pytest.mark.slow
def test_trefoil_sum_chain_cone():
    checks = verify_surgery(F.trefoil_sum(), 13)
    (c,) = checks
    assert c.cone.kind == "chain" and c.equal and c.cone.tower_in_b_row()
    assert c.direct == GradedModule.make([0], [(0, 1), (-1, 1), (-2, 1), (-2, 1)])
