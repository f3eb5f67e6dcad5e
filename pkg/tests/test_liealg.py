from fractions import Fraction

import pytest

from ospmin.liealg import (bessel_operator, pi_lambda, tangential_residue, tkk_algebra, tkk_bracket,
                           tkk_to_osp_iso, verify_homomorphism, verify_isomorphism, verify_jacobi,
                           verify_jordan_identity, verify_pi_c_well_defined, verify_tangential)
from ospmin.operators import DifferentialOperator, compose, d_lower, euler_op, mult, supercommutator
from ospmin.scalars import I
from ospmin.superpoly import ModelParams, SuperPolynomial, r_squared

P = ModelParams(4, 4, 1)


def _ok(rows):
    return rows and all(r["status"] == "PASS" for r in rows)


def test_unit_and_products():
    J = tkk_algebra(P).J
    e = {0: Fraction(1)}
    for k in range(J.N):
        u = {k: Fraction(1)}
        assert J.mul(e, u) == u
        for l in range(J.N):
            prod = J.mul(u, {l: Fraction(1)})
            if k and l:
                assert set(prod) <= {0}


def test_idempotent():
    J = tkk_algebra(P).J
    # c = e/2 + x with <x, x> = 1/4; e_1 has norm +1
    c = {0: Fraction(1, 2), 1: Fraction(1, 2)}
    assert J.mul(c, c) == c


def test_brackets_and_le_action():
    g = tkk_algebra(P)
    assert tkk_bracket(g.elements()[1], g.elements()[2]).is_zero()
    Le = g.basis("Le")
    for k in range(g.J.N):
        em = g.elements()[g.minus_start + k]
        assert tkk_bracket(Le, em) == em.scale(-1)


def test_representation_table():
    g = tkk_algebra(P)
    sp = P.space
    lam = Fraction(3)
    assert pi_lambda(g.basis("Le"), lam) == DifferentialOperator.scalar(sp, lam / 2) - euler_op(sp)
    for k in range(g.J.N):
        v = g.J.var[k]
        assert pi_lambda(g.elements()[g.minus_start + k], lam) == mult(SuperPolynomial.variable(sp, v)).scale(-I)
        assert pi_lambda(g.elements()[k], lam) == bessel_operator(P, k, lam).scale(-I)


def test_bessel_r2_commutator():
    sp = P.space
    lam = Fraction(1)
    R2 = mult(r_squared(sp))
    for k in range(tkk_algebra(P).J.N):
        v = tkk_algebra(P).J.var[k]
        got = supercommutator(bessel_operator(P, k, lam), R2)
        want = (mult(SuperPolynomial.variable(sp, v)).scale(-2 * lam + 4 - 2 * P.M)
                + compose(R2, d_lower(sp, v)).scale(4))
        assert got == want


def test_bessel_operators_commute():
    lam = Fraction(2)
    N = tkk_algebra(P).J.N
    for j in range(N):
        for k in range(N):
            assert not supercommutator(bessel_operator(P, j, lam), bessel_operator(P, k, lam))


def test_tangential_residue():
    lc = 2 - P.M
    for k in range(tkk_algebra(P).J.N):
        assert not tangential_residue(P, k, lc)[1]
        assert tangential_residue(P, k, lc + 1)[1]


def test_iso_table():
    g = tkk_algebra(P)
    assert tkk_to_osp_iso(g.basis("Le"))


def test_structure_checks(params):
    assert _ok(verify_jordan_identity(params))
    assert _ok(verify_jacobi(params))
    assert _ok(verify_isomorphism(params))


@pytest.mark.parametrize("shift", [0, 2, 3])
def test_homomorphism(params, shift):
    assert _ok(verify_homomorphism(params, 2 - params.M + shift))


def test_tangentiality(params):
    lc = 2 - params.M
    for lam in (lc - 1, lc, lc + 1):
        assert _ok(verify_tangential(params, lam))
    assert _ok(verify_pi_c_well_defined(params, 1))
