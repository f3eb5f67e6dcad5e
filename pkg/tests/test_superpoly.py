import pytest
from hypothesis import given
from hypothesis import strategies as st

from ospmin.superpoly import (ModelParams, Space, SuperPolynomial, euler, laplacian, monomials_of_degree,
                              r_squared, reduce_mod_r2)

SP = ModelParams(4, 4, 1).space


@st.composite
def polys(draw, space=SP, max_deg=3):
    f = SuperPolynomial.zero(space)
    for _ in range(draw(st.integers(0, 4))):
        d = draw(st.integers(0, max_deg))
        mons = monomials_of_degree(space, d)
        a = mons[draw(st.integers(0, len(mons) - 1))]
        f = f + SuperPolynomial.monomial(space, a, draw(st.integers(-5, 5)))
    return f


def test_odd_anticommute():
    P = ModelParams(4, 4, 1)
    t1, t2 = P.theta(1), P.theta(2)
    assert t2 * t1 == -(t1 * t2)
    assert t1 * t1 == SuperPolynomial.zero(P.space)


def test_partial_sign():
    P = ModelParams(4, 4, 1)
    t1, t2 = P.theta(1), P.theta(2)
    i2 = P.theta_index(2)
    assert (t1 * t2).partial(i2) == -t1
    assert (-(t2 * t1)).partial(i2) == -t1


def test_laplacian_theta_square():
    for p, q, n in [(4, 4, 1), (3, 3, 2)]:
        P = ModelParams(p, q, n)
        sp = P.space
        r2 = r_squared(sp)
        theta2 = SuperPolynomial(sp, {a: c for a, c in r2.terms.items() if not any(a[:sp.m])})
        assert laplacian(theta2) == SuperPolynomial.constant(sp, -4 * n)


def test_laplacian_r2_is_2M(params):
    assert laplacian(r_squared(params.space)) == SuperPolynomial.constant(params.space, 2 * params.M)


def test_bad_params():
    with pytest.raises(ValueError):
        ModelParams(1, 4, 0)
    with pytest.raises(ValueError):
        ModelParams(4, 4, -1)


@given(polys(), polys(), polys())
def test_associative_distributive(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@given(polys(), polys())
def test_graded_commutativity(f, g):
    for pf in (0, 1):
        for pg in (0, 1):
            a = _parity_part(f, pf)
            b = _parity_part(g, pg)
            assert a * b == (b * a).scale((-1) ** (pf * pg))


def _parity_part(f, par):
    sp = f.space
    return SuperPolynomial(sp, {a: c for a, c in f.terms.items() if sum(a[sp.m:]) % 2 == par})


@given(polys(), polys(), st.integers(0, SP.nvars - 1))
def test_leibniz(f, g, i):
    sign = -1 if SP.parity(i) else 1
    fe, fo = _parity_part(f, 0), _parity_part(f, 1)
    lhs = (f * g).partial(i)
    rhs = f.partial(i) * g + fe * g.partial(i) + (fo * g.partial(i)).scale(sign)
    assert lhs == rhs


@given(polys())
def test_euler_counts_degree(f):
    for k in range(4):
        fk = f.homogeneous_part(k)
        assert euler(fk) == fk.scale(k)


@given(polys())
def test_reduction_kills_ideal(f):
    P = ModelParams(4, 4, 1)
    assert not reduce_mod_r2(r_squared(P.space) * f, P)


@given(polys(), polys())
def test_reduction_is_linear(f, g):
    P = ModelParams(4, 4, 1)
    assert reduce_mod_r2(f + g, P) == reduce_mod_r2(f, P) + reduce_mod_r2(g, P)
    assert reduce_mod_r2(reduce_mod_r2(f, P), P) == reduce_mod_r2(f, P)


def test_space_interned():
    assert Space([1, -1], 1) is Space([1, -1], 1)
