from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toroidal_yangian.cartan import Root, build_cartan, coroot_form
from toroidal_yangian.pbw import UElem
from toroidal_yangian.toroidal import (
    GAMMA,
    INF,
    LieElem,
    OrderAtCap,
    alt_sum_classical,
    apply_weyl_word,
    check_pi_homomorphism,
    context,
    eps_expansion,
    generator_image,
    kappa_order,
    root_vector,
    straighten_classical,
    verify_toroidal_relations,
)
from toroidal_yangian.weyl import WeylWord


def g(kind, i, k, datum):
    return generator_image((kind, i, k), datum)


def br(a, b, datum):
    return context(datum).lie_bracket(a, b)


def basis(b, p, q, c=1):
    return LieElem({("x", b, p, q): c})


@pytest.mark.parametrize("name", ["A2", "C2", "G2"])
def test_tor2_central_term(name):
    d = build_cartan(name)
    for i in d.nodes:
        for j in d.nodes:
            for k in (1, 2, -3):
                out = br(g("h", i, k, d), g("h", j, -k, d), d)
                assert out == LieElem({GAMMA: k * coroot_form(i, j, d)})


@pytest.mark.parametrize("name", ["A2", "C2"])
def test_tor3_examples(name):
    d = build_cartan(name)
    for i in d.nodes:
        for j in d.nodes:
            assert br(g("h", i, 2, d), g("e", j, -1, d), d) == g("e", j, 1, d).scale(d.A[i][j])
            assert br(g("h", i, 1, d), g("f", j, 1, d), d) == g("f", j, 2, d).scale(-d.A[i][j])


def test_loop_cocycle_without_central_term(A1):
    # [e_1 t, f_1 t^2] = h_1 t^3: s-grades cancel, t-grades do not
    L = context(A1).lie
    out = br(basis(L.e_simple(1), 0, 1), basis(L.f_simple(1), 0, 2), A1)
    assert out == basis(L.h(1), 0, 3)


def test_node_zero_tor4(A2):
    for k, l in ((1, -1), (2, 0), (-2, 2)):
        lhs = br(g("e", 0, k, A2), g("f", 0, l, A2), A2)
        rhs = g("h", 0, k + l, A2) + LieElem({GAMMA: Fraction(2 * k * (k == -l), 2)})
        assert lhs == -rhs


def test_serre_and_tor5_samples(A2):
    e1 = g("e", 1, 0, A2)
    assert br(e1, br(e1, g("e", 2, 3, A2), A2), A2).is_zero()
    assert br(g("e", 1, 2, A2), g("e", 1, -1, A2), A2).is_zero()


def test_relations_window_two():
    rep = verify_toroidal_relations(build_cartan("A1"), 2)
    assert rep.passed, rep.failures()[:3]


def random_lie(draw, datum, n=3):
    L = context(datum).lie
    out = LieElem()
    for _ in range(n):
        b = draw(st.integers(0, L.dim - 1))
        out = out + basis(b, draw(st.integers(-1, 1)), draw(st.integers(-2, 2)), draw(st.integers(-3, 3)))
    return out


@given(st.data())
def test_jacobi(data):
    d = build_cartan(data.draw(st.sampled_from(["A2", "C2", "G2"])))
    x, y, z = (random_lie(data.draw, d) for _ in range(3))
    total = br(x, br(y, z, d), d) + br(y, br(z, x, d), d) + br(z, br(x, y, d), d)
    assert total.is_zero()
    assert br(x, y, d) == -br(y, x, d)


def test_weyl_action_examples(A2):
    h2 = g("h", 2, 0, A2)
    assert apply_weyl_word(WeylWord(()), h2, A2) == h2
    for i in A2.nodes:
        for j in A2.nodes:
            hj = g("h", j, 0, A2)
            # r_i(h_j) = h_j - alpha_i(h_j) h_i
            assert apply_weyl_word(WeylWord((i,)), hj, A2) == hj - g("h", i, 0, A2).scale(A2.A[j][i])
        # sl_2 computation: r(e) = -f for the standard triple; the f_i image is -f by tor4
        e, f, _ = context(A2).sl2_triple(i)
        assert apply_weyl_word(WeylWord((i,)), e, A2) == -f == g("f", i, 0, A2)


def test_root_vector_weight(A2):
    # e_{alpha1+alpha2} is proportional to [e_1, e_2]
    v = root_vector(Root((1, 1), 0), 0, "e", A2)
    w = br(g("e", 1, 0, A2), g("e", 2, 0, A2), A2)
    (kv, cv), = v.terms.items()
    (kw, cw), = w.terms.items()
    assert kv == kw and cv in (cw, -cw)


def test_straighten_single_swap(A1):
    e, f = g("e", 1, 1, A1), g("f", 1, 2, A1)
    u = e.to_uelem() * f.to_uelem()
    expect = f.to_uelem() * e.to_uelem() + br(e, f, A1).to_uelem()
    assert straighten_classical(u, A1) == straighten_classical(expect, A1)
    ordered = straighten_classical(u, A1)
    assert straighten_classical(ordered, A1) == ordered


@given(st.data())
def test_straightening_is_confluent(data):
    d = build_cartan(data.draw(st.sampled_from(["A1", "A2"])))
    words = [random_lie(data.draw, d, 1).to_uelem() for _ in range(3)]
    u = words[0] * words[1] * words[2]
    left = straighten_classical(straighten_classical(words[0] * words[1], d) * words[2], d)
    right = straighten_classical(words[0] * straighten_classical(words[1] * words[2], d), d)
    assert straighten_classical(u, d) == left == right


@pytest.mark.parametrize("m", range(6))
def test_kappa_order_of_alternating_sums(m, A2):
    for kind in ("h", "e", "f"):
        assert kappa_order(alt_sum_classical((kind, 1), 0, m, A2), A2) == m
        for k in (-3, 1, 3):
            diff = alt_sum_classical((kind, 2), k, m, A2) - alt_sum_classical((kind, 2), 0, m, A2)
            try:
                assert kappa_order(diff, A2) >= m + 1
            except OrderAtCap as exc:
                assert exc.lower_bound >= m + 1


def test_kappa_order_trivial_cases(A2):
    assert kappa_order(g("e", 1, 0, A2).to_uelem(), A2) == 0
    assert kappa_order(UElem(), A2) == INF
    with pytest.raises(OrderAtCap):
        kappa_order(alt_sum_classical(("h", 1), 0, 4, A2), A2, cap=3)


def test_alt_sum_examples(A1):
    assert alt_sum_classical(("h", 1), 2, 0, A1) == g("h", 1, 2, A1).to_uelem()
    assert alt_sum_classical(("h", 1), 0, 1, A1) == (g("h", 1, 1, A1) - g("h", 1, 0, A1)).to_uelem()
    exp = eps_expansion(alt_sum_classical(("h", 1), 0, 2, A1))
    assert min(m for m, part in exp.items() if part) == 2


def test_eps_expansion_is_binomial(A1):
    # t^k = sum_m binom(k, m) eps^m
    (letter, _), = g("e", 1, 4, A1).terms.items()
    exp = eps_expansion(UElem({(letter,): 1}), cap=6)
    for m in range(6):
        coeffs = list(exp.get(m, {}).values())
        assert coeffs == ([comb(4, m)] if comb(4, m) else [])


@given(st.data())
def test_kappa_order_is_superadditive(data):
    d = build_cartan("A2")
    kinds = st.sampled_from(["e", "f", "h"])
    u = alt_sum_classical((data.draw(kinds), data.draw(st.sampled_from([0, 1, 2]))), 0, data.draw(st.integers(0, 2)), d)
    v = alt_sum_classical((data.draw(kinds), data.draw(st.sampled_from([0, 1, 2]))), data.draw(st.integers(-1, 1)),
                          data.draw(st.integers(0, 2)), d)
    ou, ov = kappa_order(u, d), kappa_order(v, d)
    try:
        assert kappa_order(u * v, d) >= ou + ov
    except OrderAtCap as exc:
        assert exc.lower_bound >= ou + ov


def test_pi_homomorphism_examples(A1):
    assert check_pi_homomorphism(("h", 1), ("e", 1), 1, 1, A1).passed
    assert check_pi_homomorphism(("e", 0), ("f", 0), 0, 0, A1).passed
