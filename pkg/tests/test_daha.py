"""Tests for difference-reflection operators, relations and membership."""

import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtalg.daha import (
    DiffRefOperator,
    Divisor,
    affine_mul,
    affine_reflection,
    affine_to_finite,
    check_braid,
    check_membership,
    check_quadratic,
    default_pair,
    dl_operator,
    finite_to_affine,
    mfrac_act,
    mfrac_cocycle,
    mfrac_weyl_act,
    node_reflection,
    relations_report,
    residue_at,
)
from qtalg.errors import PoleError
from qtalg.scalars import Scalar
from qtalg.torusfn import TorusFraction

A1 = default_pair("A1")
A2 = default_pair("A2")

T = Scalar.t()
QV = Scalar.q()


def frac(pair, num, dens=()):
    return TorusFraction.ratio(pair, num, dens)


# -- shift and reflection operators -------------------------------------------


def test_shift_rescales_monomials():
    mu = (1,)
    d = DiffRefOperator.shift_op(A1, mu)
    f = TorusFraction.monomial(A1, (3,))
    assert d.apply(f) == f.scale(QV**6)  # 2 <3 alpha, pi> = 6


def test_zero_shift_is_identity():
    d = DiffRefOperator.shift_op(A1, (0,))
    assert d == DiffRefOperator.identity(A1)
    f = frac(A1, {(2,): T}, [((1,), Scalar.one())])
    assert d.apply(f) == f


def test_shift_moves_denominator_factors():
    # D^mu (1/(e^a - 1)) = 1/(q^{2<a,mu>} e^a - 1)
    d = DiffRefOperator.shift_op(A1, (1,))
    f = frac(A1, {(0,): Scalar.one()}, [((1,), Scalar.one())])
    expected = TorusFraction.from_two_term_den(
        A1, {(0,): Scalar.one()}, {(1,): QV**2, (0,): Scalar.const(-1)}
    )
    assert d.apply(f) == expected


@given(st.integers(-4, 4))
@settings(max_examples=10, deadline=None)
def test_reflection_exchange_rule(k):
    # [s] e^lam = e^{s lam} [s] as operators
    s = A1.system.simple_reflection(0)
    sw = DiffRefOperator.weyl_op(A1, s)
    mono = DiffRefOperator.from_function(A1, TorusFraction.monomial(A1, (k,)))
    flipped = DiffRefOperator.from_function(A1, TorusFraction.monomial(A1, (-k,)))
    assert sw * mono == flipped * sw


def test_compose_single_term_rewriting():
    s = A2.system.simple_reflection(0)
    h1 = frac(A2, {(1, 0): T})
    h2 = frac(A2, {(0, 1): Scalar.one()})
    a = DiffRefOperator(A2, {(s, (1, 0)): h1})
    b = DiffRefOperator(A2, {(s, (0, 1)): h2})
    prod = a * b
    [(w, mu)] = prod.terms.keys()
    assert w == s * s and w.is_identity()
    assert mu == tuple(
        p + q for p, q in zip((1, 0), A2.act_y(s, (0, 1)))
    )
    # coefficient: h1 * shift_{(1,0)}(s(h2)); s(e^{a2}) = e^{a1 + a2}
    expected = h1 * frac(A2, {(1, 1): Scalar.one()}).shift_mu((1, 0))
    assert prod.terms[(w, mu)] == expected


def test_compose_with_identity_and_power():
    t1 = dl_operator(A1, 1)
    ident = DiffRefOperator.identity(A1)
    assert t1 * ident == t1 and ident * t1 == t1
    assert t1**2 == t1 * t1


# -- deformed generators -------------------------------------------------------


def test_dl_collapses_at_v_zero():
    op = dl_operator(A1, 1, 0)
    s = A1.system.simple_reflection(0)
    assert op == DiffRefOperator.weyl_op(A1, s).scale(T)
    op0 = dl_operator(A1, 0, 0)
    assert list(op0.terms) == [(s, (-2,))]


def test_dl_finite_node_closed_forms():
    op = dl_operator(A1, 1, 1)
    s = A1.system.simple_reflection(0)
    tt = T - T.inverse()
    den = [((1,), Scalar.one())]
    assert op.terms[(A1.system.identity, (0,))] == frac(A1, {(0,): -tt}, den)
    assert op.terms[(s, (0,))] == frac(A1, {(1,): T, (0,): -T.inverse()}, den)


def test_dl_affine_node_closed_forms():
    op = dl_operator(A1, 0, 1)
    s = A1.system.simple_reflection(0)
    tt = T - T.inverse()
    den = [((1,), QV**2)]
    assert op.terms[(A1.system.identity, (0,))] == frac(A1, {(1,): tt}, den)
    assert op.terms[(s, (-2,))] == frac(
        A1, {(1,): T.inverse(), (0,): -(QV**2) * T}, den
    )


def test_quadratic_symbolic_and_specialized():
    for node in (0, 1):
        assert check_quadratic(A1, node)
        assert check_quadratic(A1, node, 1)
        assert check_quadratic(A1, node, 0)


def test_quadratic_at_v_one_is_hecke():
    # (T - t)(T + 1/t) = 0
    op = dl_operator(A1, 1, 1)
    ident = DiffRefOperator.identity(A1)
    prod = (op - ident.scale(T)) * (op + ident.scale(T.inverse()))
    assert prod.is_zero()


def test_braid_a2_all_pairs():
    for i, j in ((0, 1), (0, 2), (1, 2)):
        assert check_braid(A2, i, j, 1)


def test_braid_infinite_order_rejected():
    with pytest.raises(ValueError, match="infinite"):
        check_braid(A1, 0, 1)


def test_relations_report_shape():
    rep = relations_report(A1, 1)
    assert rep["ok"]
    assert rep["infinite_order_pairs"] == [(0, 1)]
    assert set(rep["quadratic"]) == {0, 1}


def test_operator_equality_matches_pointwise_action():
    rng = random.Random(7)
    gens = [dl_operator(A2, n, 1) for n in (0, 1, 2)]
    monos = [
        TorusFraction.monomial(A2, (a, b)) for a in (-1, 0, 1) for b in (-1, 0, 1)
    ]

    def rand_op():
        out = DiffRefOperator.identity(A2)
        for _ in range(rng.randint(1, 3)):
            out = out * rng.choice(gens)
        return out

    for _ in range(6):
        a, b = rand_op(), rand_op()
        same_normal = a == b
        same_pointwise = all(a.apply(f) == b.apply(f) for f in monos)
        assert same_normal == same_pointwise


# -- residues ------------------------------------------------------------------


def test_residue_simple_pole():
    f = frac(A1, {(0,): Scalar.one()}, [((1,), Scalar.one())])
    assert residue_at(f, Divisor((1,), 1)) == TorusFraction.one(A1)
    assert residue_at(f, Divisor((1,), T**2)).is_zero()


def test_residue_restricts_transverse_factors():
    dens = [((1, 0), Scalar.one()), ((0, 1), QV**2)]
    f = frac(A2, {(0, 0): Scalar.one()}, dens)
    expected = frac(A2, {(0, 0): Scalar.one()}, [((0, 1), QV**2)])
    assert residue_at(f, Divisor((1, 0), 1)) == expected


def test_residue_rejects_double_pole():
    f = frac(A1, {(0,): Scalar.one()}, [((1,), Scalar.one()), ((1,), Scalar.one())])
    with pytest.raises(PoleError):
        residue_at(f, Divisor((1,), 1))


# -- membership ----------------------------------------------------------------


def test_generators_and_short_products_are_members():
    gens = [dl_operator(A1, n, 1) for n in (0, 1)]
    for g in gens:
        assert check_membership(g)["ok"]
    for a in gens:
        for b in gens:
            assert check_membership(a * b)["ok"]


def test_multiplication_operator_is_member():
    op = DiffRefOperator.from_function(A1, TorusFraction.monomial(A1, (2,), T))
    assert check_membership(op)["ok"]


def test_membership_rejects_pole_off_family():
    bad = DiffRefOperator.from_function(
        A1, frac(A1, {(0,): Scalar.one()}, [((1,), T**4)])
    )
    rep = check_membership(bad)
    assert not rep["ok"]
    assert {v["rule"] for v in rep["violations"]} == {"pole-location"}


def test_membership_rejects_unpaired_residue():
    bad = DiffRefOperator.from_function(
        A1, frac(A1, {(0,): Scalar.one()}, [((1,), Scalar.one())])
    )
    rep = check_membership(bad)
    assert not rep["ok"]
    assert "residue-sum" in {v["rule"] for v in rep["violations"]}


def test_membership_rejects_missing_vanishing():
    bad = DiffRefOperator.shift_op(A1, (1,))
    rep = check_membership(bad)
    assert not rep["ok"]
    rules = {v["rule"] for v in rep["violations"]}
    assert rules == {"forced-vanishing"}


def test_membership_residue_cancellation_is_exact():
    op = dl_operator(A1, 1, 1)
    s = A1.system.simple_reflection(0)
    r_e = op.terms[(A1.system.identity, (0,))].residue((1,), Scalar.one())
    r_s = op.terms[(s, (0,))].residue((1,), Scalar.one())
    tt = T - T.inverse()
    assert r_e == TorusFraction.from_scalar(A1, -tt)
    assert r_s == TorusFraction.from_scalar(A1, tt)
    assert (r_e + r_s).is_zero()


# -- affine bookkeeping ----------------------------------------------------------


def test_affine_round_trip():
    op = dl_operator(A2, 0, 1) * dl_operator(A2, 1, 1)
    coeffs = finite_to_affine(op)
    assert affine_to_finite(A2, coeffs) == op


def test_translations_only():
    f = {((1, 0), A2.system.identity): TorusFraction.one(A2)}
    op = affine_to_finite(A2, f)
    assert op == DiffRefOperator.shift_op(A2, (1, 0))


def test_affine_reflection_is_involution():
    alpha = A1.system.highest_root
    refl = affine_reflection(A1, alpha, 1)
    assert refl == ((2,), A1.system.simple_reflection(0))
    square = affine_mul(A1, refl, refl)
    assert square == ((0,), A1.system.identity)


def test_affine_reflection_product_bookkeeping():
    # s_{(alpha,k)} (nu, w) = (k alpha_coroot + s_alpha nu, s_alpha w)
    alpha = A2.system.highest_root
    k = 2
    refl = affine_reflection(A2, alpha, k)
    s_alpha = A2.system.reflection(alpha)
    coroot_y = A2.coroot_to_y(A2.system.coroot_of(alpha))
    nu, w = (1, -1), A2.system.simple_reflection(1)
    prod = affine_mul(A2, refl, (nu, w))
    expected_mu = tuple(
        k * c + m for c, m in zip(coroot_y, A2.act_y(s_alpha, nu))
    )
    assert prod == (expected_mu, s_alpha * w)


def test_node_zero_reflection_squares_to_identity():
    s0 = node_reflection(A2, 0)
    assert s0 * s0 == DiffRefOperator.identity(A2)


# -- rank-one fractional module ---------------------------------------------------


def test_mfrac_reflections_are_involutions():
    f = TorusFraction.monomial(A2, (1, -1), T)
    for node in (0, 1, 2):
        assert mfrac_act(A2, node, mfrac_act(A2, node, f)) == f


def test_mfrac_action_on_one_is_the_cocycle():
    one = TorusFraction.one(A1)
    assert mfrac_act(A1, 1, one) == mfrac_cocycle(A1, 1)


def test_mfrac_cocycle_closed_form():
    # the half-exponent ratio equals -q^{-2}(e^a - q^2)/(e^a - q^{-2})
    c = mfrac_cocycle(A1, 1)
    expected = frac(
        A1,
        {(1,): -(QV.inverse() ** 2), (0,): Scalar.one()},
        [((1,), QV.inverse() ** 2)],
    )
    assert c == expected


def test_mfrac_braid_relation():
    f = TorusFraction.monomial(A2, (1, 0))

    def act(nodes, g):
        for n in reversed(nodes):
            g = mfrac_act(A2, n, g)
        return g

    assert act([1, 2, 1], f) == act([2, 1, 2], f)
    assert act([0, 1, 0], f) == act([1, 0, 1], f)


def test_node_zero_substitution_matches_operator():
    s0 = node_reflection(A2, 0)
    for mono in [(1, 0), (0, 1), (2, -1)]:
        f = TorusFraction.monomial(A2, mono)
        assert s0.apply(f) == mfrac_weyl_act(A2, 0, f)


# -- JSON -----------------------------------------------------------------------


def test_operator_json_round_trip():
    op = dl_operator(A2, 0) * dl_operator(A2, 2)
    data = op.to_json()
    back = DiffRefOperator.from_json(A2, data)
    assert back == op
