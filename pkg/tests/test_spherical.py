"""Tests for Hecke words, spherical idempotents and membership."""

import random
from fractions import Fraction as Q

import pytest

from qtalg.daha import DiffRefOperator, default_pair, dl_operator
from qtalg.scalars import Scalar
from qtalg.spherical import (
    HeckeExpression,
    antisymmetrizer_word,
    check_absorption,
    check_sign_absorption,
    check_spherical,
    hecke_word_operator,
    idempotent_e_v,
    idempotent_eps_v,
    im_involution,
    reduced_words,
    sign_rep_apply,
    spherical_ratio,
    symmetrizer_word,
)
from qtalg.torusfn import TorusFraction

A1 = default_pair("A1")
A2 = default_pair("A2")
B2 = default_pair("B2")

T = Scalar.t()
ONE = Scalar.one()


def frac(pair, num, dens=()):
    return TorusFraction.ratio(pair, num, dens)


# -- Hecke words ---------------------------------------------------------------


def test_reduced_words_inventory():
    w0 = B2.system.longest_element
    assert sorted(reduced_words(B2.system, w0)) == [(1, 2, 1, 2), (2, 1, 2, 1)]
    assert reduced_words(A1.system, A1.system.identity) == [()]


def test_word_independence_a2_symbolic():
    for w in A2.system.elements:
        ops = [hecke_word_operator(A2, word) for word in reduced_words(A2.system, w)]
        assert all(op == ops[0] for op in ops[1:])


def test_word_independence_b2():
    for w in B2.system.elements:
        ops = [
            hecke_word_operator(B2, word, 1) for word in reduced_words(B2.system, w)
        ]
        assert all(op == ops[0] for op in ops[1:])


def test_word_rejects_affine_node():
    with pytest.raises(ValueError, match="1..rank"):
        hecke_word_operator(A1, [0])


# -- idempotents ----------------------------------------------------------------


def test_e0_is_the_classical_symmetrizer():
    e0 = idempotent_e_v(A1, 0)
    s = A1.system.simple_reflection(0)
    half = Scalar.const(Q(1, 2))
    expected = (
        DiffRefOperator.identity(A1) + DiffRefOperator.weyl_op(A1, s)
    ).scale(half)
    assert e0 == expected


def test_sl2_closed_forms():
    e = idempotent_e_v(A1, 1)
    s = A1.system.simple_reflection(0)
    t2 = T * T
    norm = (ONE + t2).inverse()
    den = [((1,), ONE)]
    a = frac(A1, {(1,): t2, (0,): Scalar.const(-1)}, den).scale(norm)
    b = frac(A1, {(1,): ONE, (0,): -t2}, den).scale(norm)
    assert e.terms[(s, (0,))] == a
    assert e.terms[(A1.system.identity, (0,))] == b
    assert a.weyl_act(s) == b
    assert a == TorusFraction.one(A1) - b


def test_e_v_idempotent_symbolic():
    for pair in (A1, A2):
        e = idempotent_e_v(pair)
        assert e * e == e


def test_e_v_idempotent_b2_numeric():
    for v in (0, 1, 3):
        e = idempotent_e_v(B2, v)
        assert e * e == e


def test_eps_v_idempotent_and_xi_image():
    eps = idempotent_eps_v(A1)
    assert eps * eps == eps
    assert im_involution(symmetrizer_word(A1.system)) == antisymmetrizer_word(
        A1.system
    )


def test_absorption():
    assert check_absorption(A1, 1)  # symbolic v
    assert check_absorption(A1, 1, 0)
    assert check_absorption(A2, 1, 1)
    assert check_absorption(A2, 2, 1)


def test_sign_absorption():
    assert check_sign_absorption(A1, 1)
    assert check_sign_absorption(A2, 2, 1)


def test_generator_eigenvalues():
    # (T - t)(T - (v(t - 1/t) - t)) = 0, symbolically in v
    v = Scalar.v()
    eigen = v * (T - T.inverse()) - T
    ident = DiffRefOperator.identity(A1)
    for node in (0, 1):
        op = dl_operator(A1, node)
        prod = (op - ident.scale(T)) * (op - ident.scale(eigen))
        assert prod.is_zero()


def test_word_and_operator_representations_agree():
    v = Scalar.one()
    expr = symmetrizer_word(A2.system, v)
    direct = DiffRefOperator.zero(A2)
    for word, coeff in expr.terms.items():
        indices = [i for _, i in word]
        direct = direct + hecke_word_operator(A2, indices, v).scale(coeff)
    assert direct == idempotent_e_v(A2, v)


def test_vanishing_normalization_is_an_error():
    # at v = t^2/(t^2 - 1) the scale y vanishes, so W(t, v) has no meaning
    t2 = T * T
    bad_v = t2 * (t2 - ONE).inverse()
    with pytest.raises((ValueError, ZeroDivisionError)):
        idempotent_e_v(A1, bad_v)


# -- spherical membership --------------------------------------------------------


def test_e_itself_is_spherical():
    rep = check_spherical(idempotent_e_v(A1, 1))
    assert rep.ok and rep.terms_checked == 2


def test_sandwiches_are_spherical():
    e = idempotent_e_v(A1, 1)
    rng = random.Random(11)
    gens = [dl_operator(A1, n, 1) for n in (0, 1)]
    for _ in range(4):
        g = DiffRefOperator.identity(A1)
        for _ in range(rng.randint(1, 3)):
            g = g * rng.choice(gens)
        h = e * g * e
        assert check_spherical(h).ok
        assert e * h * e == h


def test_bare_generator_is_not_spherical():
    rep = check_spherical(dl_operator(A1, 1, 1))
    assert not rep.ok
    witness = rep.first_witness()
    assert witness is not None and witness["node"] == 1
    assert any(f["condition"] == "right-ratio" for f in rep.failures)
    assert any(f["condition"] == "left-equivariance" for f in rep.failures)


def test_sl2_series_ratio():
    # the right-ratio factor after a shift by mu = (n,)
    q2 = Scalar.q() ** 2
    t2 = T * T
    for n in (1, -2):
        shifted = spherical_ratio(A1, 1).shift_mu((n,))
        qn = q2**n
        expected = TorusFraction.from_two_term_den(
            A1, {(1,): t2 * qn, (0,): Scalar.const(-1)}, {(1,): qn, (0,): -t2}
        )
        assert shifted == expected


def test_spherical_ratio_rejects_affine_node():
    with pytest.raises(ValueError, match="finite"):
        spherical_ratio(A1, 0)


def test_report_json_shape():
    rep = check_spherical(dl_operator(A1, 1, 1))
    data = rep.to_json()
    assert data["ok"] is False
    assert data["failures"][0]["mu"] == [0]


# -- involution -------------------------------------------------------------------


def test_xi_is_an_involution_on_words():
    expr = HeckeExpression.word([1, 2], 1) * HeckeExpression.monomial((1, -1), 1)
    assert im_involution(im_involution(expr)) == expr


def test_xi_image_satisfies_the_quadratic():
    v = Scalar.v()
    d = v * (T - T.inverse())
    kappa = v + T * T * (ONE - v)
    image = im_involution(HeckeExpression.generator(1)).to_operator(A1)
    ident = DiffRefOperator.identity(A1)
    assert image * image == image.scale(d) + ident.scale(kappa)


def test_xi_images_satisfy_braid():
    u1 = im_involution(HeckeExpression.generator(1, 1)).to_operator(A2)
    u2 = im_involution(HeckeExpression.generator(2, 1)).to_operator(A2)
    assert u1 * u2 * u1 == u2 * u1 * u2


def test_xi_rejects_operators():
    with pytest.raises(TypeError, match="generator-word"):
        im_involution(dl_operator(A1, 1))


def test_expression_json_round_trip():
    expr = symmetrizer_word(A2.system) * HeckeExpression.monomial((0, 1))
    assert HeckeExpression.from_json(expr.to_json()) == expr


# -- sign representation ----------------------------------------------------------


def antisym_a1():
    return frac(A1, {(1,): ONE, (-1,): Scalar.const(-1)})


def test_antisymmetric_function_basics():
    f = antisym_a1()
    s = A1.system.simple_reflection(0)
    assert f.weyl_act(s) == -f


def test_projector_fixes_its_image():
    eps = idempotent_eps_v(A1, 0)
    g = eps.apply(frac(A1, {(2,): ONE}))
    assert eps.apply(g) == g
    assert not g.is_zero()


def test_sign_rep_action_preserves_antisymmetry():
    v = Scalar.zero()
    e_word = symmetrizer_word(A1.system, v)
    a = e_word * HeckeExpression.monomial((1,), v) * e_word
    f = antisym_a1()
    image = sign_rep_apply(A1, a, f)
    s = A1.system.simple_reflection(0)
    assert image.weyl_act(s) == -image


def test_sign_rep_rejects_functions_outside_the_space():
    a = symmetrizer_word(A1.system, Scalar.zero())
    with pytest.raises(ValueError, match="projected subspace"):
        sign_rep_apply(A1, a, frac(A1, {(1,): ONE}))


def test_custom_projector_hook():
    v = Scalar.zero()
    eps_word = antisymmetrizer_word(A1.system, v)
    a = eps_word * HeckeExpression.monomial((-1,), v) * eps_word
    sym = frac(A1, {(1,): ONE, (-1,): ONE})
    image = sign_rep_apply(
        A1, a, sym, projector=symmetrizer_word(A1.system, v)
    )
    s = A1.system.simple_reflection(0)
    assert image.weyl_act(s) == image
