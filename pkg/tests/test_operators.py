from hypothesis import given
from hypothesis import strategies as st

from ospmin.operators import (DifferentialOperator, compose, d_lower, euler_op, formal_adjoint, laplacian_op, mult,
                              osp_generator, r2_op, supercommutator, verify_sl2)
from ospmin.superpoly import ModelParams, SuperPolynomial, euler, laplacian

from test_superpoly import SP, polys

P = ModelParams(4, 4, 1)


def test_sl2_relations(params):
    rows = verify_sl2(params.space)
    assert rows and all(r["status"] == "PASS" for r in rows)


def test_delta_r2_commutator():
    sp = P.space
    got = supercommutator(laplacian_op(sp), r2_op(sp))
    assert got == euler_op(sp).scale(4) + DifferentialOperator.scalar(sp, 2 * P.M)


def test_adjoint_examples():
    sp = P.space
    x1 = P.x_index(1)
    assert formal_adjoint(d_lower(sp, x1)) == -d_lower(sp, x1)
    assert formal_adjoint(euler_op(sp)) == -euler_op(sp) - DifferentialOperator.scalar(sp, P.M)


@given(polys())
def test_operators_match_polynomial_versions(f):
    sp = SP
    assert euler_op(sp).apply(f) == euler(f)
    assert laplacian_op(sp).apply(f) == laplacian(f)


@given(polys(max_deg=2), st.integers(0, SP.nvars - 1), st.integers(0, SP.nvars - 1))
def test_compose_is_application_order(f, i, j):
    A, B = d_lower(SP, i), mult(SuperPolynomial.variable(SP, j))
    assert compose(A, B).apply(f) == A.apply(B.apply(f))


@given(st.integers(0, SP.nvars - 1), st.integers(0, SP.nvars - 1))
def test_adjoint_is_involutive(i, j):
    A = compose(mult(SuperPolynomial.variable(SP, i)), d_lower(SP, j))
    assert formal_adjoint(formal_adjoint(A)) == A


def test_osp_generators_commute_with_laplacian():
    sp = P.space
    D = laplacian_op(sp)
    for i in range(sp.nvars):
        for j in range(sp.nvars):
            assert not supercommutator(osp_generator(sp, i, j), D)
