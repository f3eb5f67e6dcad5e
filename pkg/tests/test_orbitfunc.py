import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ospmin.orbitfunc import (DivergenceError, OrbitFunction, berezin_raw, converges, gram_nondegeneracy,
                              knu_closed_form, orbit_integral, phi_sharp, radial_moment, radial_moment_numeric,
                              sesquilinear, sigma_closed, sigma_sum, sphere_moment, theta_volume,
                              verify_integral_properties, verify_knu)
from ospmin.minrep import w_module
from ospmin.scalars import ExactScalar, gamma_value
from ospmin.superpoly import ModelParams, SuperPolynomial, r_squared

P = ModelParams(4, 4, 1)


def test_radial_moment_examples():
    assert radial_moment(2, 0, 0) == ExactScalar(Fraction(1, 2))
    assert radial_moment(4, 0, 0) == ExactScalar(2) * gamma_value(2) ** 4 / gamma_value(4)
    assert radial_moment_numeric(2, 0, 0) == pytest.approx(0.5, rel=1e-10)


def test_divergence():
    assert not converges(2, 1, 0)
    with pytest.raises(DivergenceError):
        radial_moment(2, 1, 0)


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(1, 4))
def test_radial_moment_against_quadrature(a2, b2, extra):
    a, b = Fraction(a2, 2), Fraction(b2, 2)
    sigma = int(2 * max(a, 0) + 2 * max(b, 0)) + extra
    exact = float(radial_moment(sigma, a, b))
    assert radial_moment_numeric(sigma, a, b) == pytest.approx(exact, rel=1e-8)


def test_sphere_moments():
    assert sphere_moment(1, (0,)) == ExactScalar(2)
    assert sphere_moment(2, (0, 0)) == ExactScalar(2, power=2)
    assert sphere_moment(3, (0, 0, 0)) == ExactScalar(4, power=2)
    assert sphere_moment(3, (2, 0, 0)) == ExactScalar(Fraction(4, 3), power=2)
    assert not sphere_moment(3, (1, 1, 0))


@pytest.mark.parametrize("n", range(4))
def test_berezin_conventions(n):
    sp = ModelParams(3, 3, n).space
    top = SuperPolynomial.monomial(sp, (0,) * sp.m + (1,) * (2 * n))
    assert berezin_raw(top) == ExactScalar(1)
    want = (-2) ** n * math.factorial(n) * (-1) ** (n * (n - 1) // 2)
    assert theta_volume(n) == ExactScalar(want)


def test_phi_sharp_generators():
    sp = P.space
    x1 = OrbitFunction.from_poly(P.x(1), (), P)
    y1 = OrbitFunction.from_poly(P.y(1), (), P)
    k = OrbitFunction.from_poly(SuperPolynomial.constant(sp, 1), [Fraction(1, 2)], P)
    (key, _), = phi_sharp(x1).terms.items()
    assert key[-2:] == (1, 0)
    (key, _), = phi_sharp(y1).terms.items()
    assert key[-2:] == (0, 1)
    (key, _), = phi_sharp(k).terms.items()
    assert key[-2:] == (0, 0)


@given(st.integers(0, P.space.nvars - 1), st.integers(0, P.space.nvars - 1))
def test_phi_sharp_multiplicative(i, j):
    sp = P.space
    f = OrbitFunction.from_poly(SuperPolynomial.variable(sp, i), [Fraction(-1, 2)], P)
    g = OrbitFunction.from_poly(SuperPolynomial.variable(sp, j), [Fraction(1, 2)], P)
    assert phi_sharp(f * g) == phi_sharp(f) * phi_sharp(g)


@pytest.mark.parametrize("triple", [(4, 4, 1), (6, 4, 1), (3, 5, 0), (5, 5, 1), (6, 6, 2), (4, 4, 0)])
def test_knu_integral(triple):
    rows = verify_knu(ModelParams(*triple))
    assert all(r["status"] == "PASS" for r in rows), rows


@pytest.mark.parametrize("n", range(4))
def test_sigma_factor(n):
    for p, q in [(4, 4), (6, 4), (3, 5), (7, 5)]:
        assert sigma_sum(p, q, n) == sigma_closed(p, q, n)


def test_vanishes_on_r2():
    f = OrbitFunction.from_poly(r_squared(P.space), [Fraction(P.nu, 2)] * 2, P)
    assert not orbit_integral(f)


def test_integral_properties(params):
    rows = verify_integral_properties(params, samples=4, seed=3)
    assert all(r["status"] != "FAIL" for r in rows)
    assert sum(r["status"] == "PASS" for r in rows) >= 4 * 5


def test_gram_w0():
    rep = gram_nondegeneracy(P, 0)
    assert rep["status"] == "PASS"
    lam0 = gamma_value(Fraction(P.mu + 2, 2))
    assert rep["gram"][0][0] == knu_closed_form(P) / (lam0 * lam0)


def test_superhermitian():
    mod = w_module(P, 1)
    rng = random.Random(5)
    idx = list(range(len(mod.basis)))
    for _ in range(6):
        a, b = rng.choice(idx), rng.choice(idx)
        f, g = mod.basis[a].mixed, mod.basis[b].mixed
        sign = (-1) ** (f.parity() * g.parity())
        assert sesquilinear(f, g) == sesquilinear(g, f).conj() * sign
