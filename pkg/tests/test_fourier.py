from fractions import Fraction

import pytest

from ospmin.fourier import (fourier_symbol, mu_critical, pi_hat, verify_adjoint, verify_fourier_table,
                            verify_ker_delta, verify_pi_hat_homomorphism, verify_symbol_relations)
from ospmin.liealg import tkk_algebra
from ospmin.operators import DifferentialOperator, d_lower, euler_op
from ospmin.superpoly import ModelParams

P = ModelParams(4, 4, 1)


def _ok(rows):
    return rows and all(r["status"] == "PASS" for r in rows)


def test_mu_critical():
    assert mu_critical(P) == Fraction(-(8 - 4 - 2), 4 * (8 - 1 - 2))


def test_table_entries():
    g = tkk_algebra(P)
    sp = P.space
    lam = Fraction(1)
    assert pi_hat(g.basis("Le"), lam) == euler_op(sp) - DifferentialOperator.scalar(sp, lam / 2)
    for k in range(g.J.N):
        assert pi_hat(g.elements()[g.minus_start + k], lam) == d_lower(sp, g.J.var[k])


def test_symbol_is_involutive_up_to_sign():
    sp = P.space
    for k in range(sp.nvars):
        D = d_lower(sp, k)
        assert fourier_symbol(fourier_symbol(D)) == -D


def test_symbol_relations(params):
    assert _ok(verify_symbol_relations(params))


@pytest.mark.parametrize("shift", [0, 2, 3])
def test_fourier_block(params, shift):
    lam = 2 - params.M + shift
    assert _ok(verify_fourier_table(params, lam))
    assert _ok(verify_ker_delta(params, lam, 2))
    assert _ok(verify_adjoint(params, lam))
    assert _ok(verify_pi_hat_homomorphism(params, lam))
