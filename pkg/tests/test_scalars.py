from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ospmin.scalars import (I, ONE, PI, SQRT_PI, ZERO, ExactScalar, gamma_value, nullspace, pochhammer, rank,
                            render)

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def scalars(draw):
    out = ZERO
    for _ in range(draw(st.integers(0, 3))):
        out = out + ExactScalar.gaussian(draw(fracs), draw(fracs), power=draw(st.integers(-3, 3)))
    return out


def test_constants():
    assert I * I == -ONE
    assert SQRT_PI * SQRT_PI == PI
    assert PI * ExactScalar(1, power=-2) == ONE


def test_gamma_half_integers():
    assert gamma_value(Fraction(1, 2)) == SQRT_PI
    assert gamma_value(Fraction(3, 2)) == SQRT_PI * Fraction(1, 2)
    assert gamma_value(Fraction(-1, 2)) == SQRT_PI * -2
    assert gamma_value(5) == ExactScalar(24)


def test_gamma_pole():
    with pytest.raises((ValueError, ZeroDivisionError)):
        gamma_value(-2)


def test_pochhammer():
    assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)
    assert pochhammer(3, 0) == 1
    assert pochhammer(-2, 3) == 0


@given(scalars(), scalars(), scalars())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(scalars(), scalars())
def test_conjugation(a, b):
    assert (a * b).conj() == a.conj() * b.conj()
    assert a.conj().conj() == a


@given(scalars())
def test_text_round_trip(a):
    assert ExactScalar.from_text(a.to_text()) == a
    assert render(a) == a.to_text()


@given(scalars())
def test_monomial_inverse(a):
    if a.is_monomial() and a:
        assert a * a.inverse() == ONE


def test_numeric_value():
    x = ExactScalar(Fraction(3, 2), power=1)
    assert abs(float(x) - 1.5 * 3.141592653589793 ** 0.5) < 1e-15


def test_linear_algebra():
    rows = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)]]
    assert rank(rows, 3) == 1
    ns = nullspace(rows, 3)
    assert len(ns) == 2
    for v in ns:
        assert sum(r * x for r, x in zip(rows[0], v)) == 0
