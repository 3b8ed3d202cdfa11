from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toroidal_yangian.cartan import build_cartan, enumerate_positive_roots
from toroidal_yangian.yangian import (
    HY,
    XM,
    XP,
    HPoly,
    LevelUnsupported,
    SpanningCaps,
    YPoly,
    canonical_yangian,
    enumerate_spanning_monomials,
    filtration_degree,
    level0_image,
    rescale,
    straighten_yangian,
    tau_zero,
    verify_tau_level0,
    verify_yangian_relations,
    yangian_reduces_to_zero,
    yangian_root_vector0,
    ycommutator,
)
from toroidal_yangian.yangian import spanning_generators


def g(kind, i, m):
    return YPoly.gen(kind, i, m)


def test_hpoly_arithmetic():
    a = HPoly.const(2) + HPoly.hbar(1, 3)
    assert a * a == HPoly.const(4) + HPoly.hbar(1, 12) + HPoly.hbar(2, 9)
    assert a.subs(2) == HPoly.const(2) + HPoly.hbar(1, 6)
    assert not (a - a)


def test_negative_level_rejected():
    with pytest.raises(ValueError):
        YPoly.gen(XP, 1, -1)


def test_y2_bracket(A2):
    nf, ok = straighten_yangian(ycommutator(g(XP, 1, 1), g(XM, 1, 2)), A2)
    assert ok and nf == g(HY, 1, 3)
    nf, ok = straighten_yangian(ycommutator(g(XP, 1, 1), g(XM, 2, 0)), A2)
    assert ok and nf.is_zero()


def test_y3_bracket(A2):
    # [h_{1,1}, x+_{2,0}] = a x+_{2,1} + (hbar a / 2)(h_{1,0} x+_{2,0} + x+_{2,0} h_{1,0}), a = -1
    lhs = straighten_yangian(ycommutator(g(HY, 1, 1), g(XP, 2, 0)), A2)[0]
    half = HPoly.hbar(1, Fraction(-1, 2))
    rhs = g(XP, 2, 1).scale(-1) + (g(HY, 1, 0) * g(XP, 2, 0) + g(XP, 2, 0) * g(HY, 1, 0)).scale(half)
    assert lhs == straighten_yangian(rhs, A2)[0]


def test_y4_same_node(A1):
    # x+_{1,1} x+_{1,0} = x+_{1,0} x+_{1,1} + hbar (x+_{1,0})^2
    nf = straighten_yangian(g(XP, 1, 1) * g(XP, 1, 0), A1)[0]
    assert nf == g(XP, 1, 0) * g(XP, 1, 1) + (g(XP, 1, 0) * g(XP, 1, 0)).scale(HPoly.hbar())


def test_tau_examples(C2):
    for i in C2.nodes:
        assert tau_zero(i, g(XP, i, 0), C2) == -g(XM, i, 0)
        assert tau_zero(i, g(XM, i, 0), C2) == -g(XP, i, 0)
        for j in C2.nodes:
            assert tau_zero(i, g(HY, j, 0), C2) == g(HY, j, 0) - g(HY, i, 0).scale(C2.A[i][j])
    with pytest.raises(LevelUnsupported):
        tau_zero(1, g(XP, 1, 1), C2)


@pytest.mark.parametrize("name", ["A1", "A2", "C2"])
def test_tau_level0(name):
    rep = verify_tau_level0(build_cartan(name))
    assert rep.passed, rep.failures()[:3]


def test_root_vector_weights(A2):
    # every word of x^+_{beta,0} has signed node content equal to beta
    for beta, _ in enumerate_positive_roots(A2, 1):
        if beta.is_imaginary:
            continue
        v = yangian_root_vector0(beta, 1, A2)
        assert not v.is_zero()
        for w in v.terms:
            content = [0] * len(A2.nodes)
            for x in w:
                content[x[1]] += x[0] - 1
            k = beta.k
            assert tuple(content) == (k,) + tuple(f + k * t for f, t in zip(beta.finite, A2.theta))


def test_level0_image_of_root_vector(A2):
    beta = A2.simple_root(1) + A2.simple_root(2)
    img = level0_image(yangian_root_vector0(beta, 1, A2), A2)
    assert not img.is_zero()


def test_rescale_laws(A1):
    p = g(XP, 1, 2) * g(HY, 1, 1) + g(XM, 1, 0).scale(HPoly.hbar())
    assert rescale(p, 3) == (g(XP, 1, 2) * g(HY, 1, 1)).scale(27) + g(XM, 1, 0).scale(HPoly.hbar(1, 3))
    assert rescale(rescale(p, 2), Fraction(1, 2)) == p
    with pytest.raises(ValueError):
        rescale(p, 0)


@given(st.integers(1, 3), st.integers(0, 2), st.integers(0, 2))
def test_rescale_is_a_homomorphism_on_relations(r, m, n):
    d = build_cartan("A1")
    a, b = g(XP, 1, m), g(XM, 1, n)
    lhs = rescale(straighten_yangian(a * b, d)[0], r)
    rhs = straighten_yangian(rescale(a, r) * rescale(b, r), d)[0]
    assert lhs == rhs


def _oracle_count(n, L):
    # multisets of size <= L drawn from n generators
    return sum(comb(n + k - 1, k) for k in range(L + 1))


@pytest.mark.parametrize("caps,expected", [((1, 1, 1), 21), ((3, 2, 1), 5456)])
def test_spanning_counts(A1, caps, expected):
    c = SpanningCaps(*caps)
    n = len(spanning_generators(c, A1))
    got = enumerate_spanning_monomials(c, A1)
    assert len(got) == expected == _oracle_count(n, caps[0])
    assert len(set(got)) == len(got)


def test_spanning_caps_validate():
    with pytest.raises(ValueError):
        SpanningCaps(-1, 0, 0)


def test_relations_A1_level2():
    rep = verify_yangian_relations(build_cartan("A1"), 2)
    assert rep.passed, rep.failures()[:3]


def test_relations_A2_level1(A2):
    rep = verify_yangian_relations(A2, 1)
    assert rep.passed, rep.failures()[:3]


def test_serre_needs_reducer(A2):
    # x+_{1,0}^2 x+_{2,0} - 2 x+_{1,0} x+_{2,0} x+_{1,0} + x+_{2,0} x+_{1,0}^2
    a, b = g(XP, 1, 0), g(XP, 2, 0)
    serre = a * a * b - (a * b * a).scale(2) + b * a * a
    assert yangian_reduces_to_zero(serre, A2) == "zero"
    assert yangian_reduces_to_zero(a * b, A2) == "nonzero"


@given(st.lists(st.tuples(st.sampled_from([XM, HY, XP]), st.sampled_from([1, 2]), st.integers(0, 2)),
                min_size=1, max_size=3))
def test_straightening_does_not_raise_filtration(letters):
    d = build_cartan("A2")
    p = YPoly({tuple(letters): 1})
    nf, ok = canonical_yangian(p, d)
    assert ok and filtration_degree(nf) <= filtration_degree(p)
