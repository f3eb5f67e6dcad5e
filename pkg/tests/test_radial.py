from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from ospmin.radial import (RadialElement, d_radial, gegenbauer, itilde, ktilde, laguerre, laguerre_identities,
                           laguerre_numeric_oracle)
from ospmin.scalars import gamma_value
from ospmin.superpoly import SuperPolynomial

halves = st.integers(-6, 6).map(lambda k: Fraction(k, 2))


def test_k0_derivative():
    b = Fraction(1, 2)
    assert d_radial(RadialElement.K(b)) == RadialElement.K(b, k=1, m=1, c=Fraction(-1, 2))


def test_k2_canonical_form():
    b = Fraction(1, 3)
    want = RadialElement(b, {(-2, 1): 4 * (b + 1), (-2, 0): 4})
    assert RadialElement.K(b, k=2) == want


@given(halves, st.integers(0, 3), st.integers(-2, 3))
def test_canonical_form_is_numerically_faithful(b, k, m):
    f = RadialElement.K(b, k=k, m=m)
    for x in (0.7, 1.9):
        exact = x ** m * ktilde(float(b + k), x)
        assert f.evaluate(x) == pytest.approx(exact, rel=1e-10)


@given(halves, st.integers(0, 2), st.integers(0, 3))
def test_derivative_numerically(b, k, m):
    f = RadialElement.K(b, k=k, m=m)
    x, h = 1.3, 1e-5
    num = (f.evaluate(x + h) - f.evaluate(x - h)) / (2 * h)
    assert d_radial(f).evaluate(x) == pytest.approx(num, rel=1e-6, abs=1e-9)


def test_laguerre_j0_and_negative():
    mu, nu = 1, -1
    lam = laguerre(mu, nu, 0)
    assert lam == RadialElement.K(Fraction(nu, 2)).scale(1 / gamma_value(Fraction(mu + 2, 2)))
    assert not laguerre(mu, nu, -1)


@pytest.mark.parametrize("mu,nu", [(1, -1), (2, 0), (3, 1), (5, 1), (2, 2)])
def test_laguerre_identities(mu, nu):
    for j in range(5):
        for name, (lhs, rhs) in laguerre_identities(mu, nu, j).items():
            assert lhs == rhs, (name, j)


@pytest.mark.parametrize("mu,nu,j", [(1, -1, 1), (3, 1, 2), (2, 0, 3)])
def test_numeric_oracle(mu, nu, j):
    lam = laguerre(mu, nu, j, strict=False)
    for x in (0.5, 1.3, 2.0):
        assert lam.evaluate(x) == pytest.approx(laguerre_numeric_oracle(mu, nu, j, x), rel=1e-8, abs=1e-14)


@given(st.floats(0.2, 1.5), st.floats(0.3, 4.0))
def test_bessel_ode(a, z):
    h = 1e-3 * z
    for u in (lambda t: ktilde(a, t), lambda t: itilde(a, t)):
        d1 = (u(z + h) - u(z - h)) / (2 * h)
        d2 = (u(z + h) - 2 * u(z) + u(z - h)) / h ** 2
        terms = (z * z * d2, (2 * a + 1) * z * d1, -z * z * u(z))
        assert abs(sum(terms)) <= 1e-5 * max(abs(t) for t in terms)


def test_itilde_matches_scipy():
    for a in (0.5, 1.0, 2.5):
        for z in (0.3, 1.0, 3.0):
            assert itilde(a, z) == pytest.approx((z / 2) ** (-a) * special.iv(a, z), rel=1e-12)


def test_gegenbauer_derivative_and_contiguous():
    lam = Fraction(5, 2)
    for m in range(1, 5):
        assert gegenbauer(lam, m).partial(0) == gegenbauer(lam + 1, m - 1).scale(2)
        z = SuperPolynomial.variable(gegenbauer(lam, m).space, 0)
        lhs = (1 - z * z).scale(4) * gegenbauer(lam + 1, m - 1) - (z * gegenbauer(lam, m)).scale(2 * (2 * lam - 1))
        rhs = gegenbauer(lam - 1, m + 1).scale(-(m + 1) * (2 * lam + m - 1))
        assert lhs == rhs
