"""Exact coefficients: Gaussian rationals adjoined a formal square root of pi.

An :class:`ExactScalar` is a finite sum ``sum_k c_k * sqrtpi**k`` where each
``c_k`` is a Gaussian rational ``re + i*im``.  The symbol ``sqrtpi`` is never
collapsed numerically; ``sqrtpi**2`` is simply the term of power 2.  Integer
powers may be negative so that normalisations such as ``1/Gamma(3/2)`` stay in
the ring, but division is only ever by a single monomial.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

from gmpy2 import mpq

__all__ = [
    "ExactScalar",
    "ZERO",
    "ONE",
    "I",
    "SQRT_PI",
    "PI",
    "as_scalar",
    "gamma_half",
    "gamma_value",
    "pochhammer",
    "rational",
    "render",
]

Number = Union[int, Fraction, "mpq", "ExactScalar"]

_Q0 = mpq(0)


def rational(x) -> mpq:
    """Coerce an int/Fraction/mpq/decimal-free string to an exact rational."""
    if isinstance(x, str):
        return mpq(Fraction(x))
    if isinstance(x, float):
        raise TypeError("floating point values are not exact scalars")
    return mpq(x)


class ExactScalar:
    """Element of Q(i)[sqrtpi, 1/sqrtpi]; immutable and hashable."""

    __slots__ = ("_t", "_h")

    def __init__(self, value=0, power: int = 0):
        if isinstance(value, ExactScalar):
            self._t = value._t
        elif isinstance(value, complex):
            raise TypeError("floating point values are not exact scalars")
        else:
            q = rational(value)
            self._t = {power: (q, _Q0)} if q else {}
        self._h = None

    @classmethod
    def _raw(cls, terms: dict) -> "ExactScalar":
        obj = object.__new__(cls)
        obj._t = terms
        obj._h = None
        return obj

    @classmethod
    def from_terms(cls, terms: Mapping[int, tuple]) -> "ExactScalar":
        """Build from ``{power: (re, im)}``; zero entries are dropped."""
        out = {}
        for k, (a, b) in terms.items():
            a, b = rational(a), rational(b)
            if a or b:
                out[int(k)] = (a, b)
        return cls._raw(out)

    @classmethod
    def gaussian(cls, re_part, im_part=0, power: int = 0) -> "ExactScalar":
        return cls.from_terms({power: (re_part, im_part)})

    # ----------------------------------------------------------------- access
    @property
    def terms(self) -> dict:
        """Copy of the ``{power: (re, im)}`` map with Fraction components."""
        return {k: (Fraction(int(a.numerator), int(a.denominator)),
                    Fraction(int(b.numerator), int(b.denominator)))
                for k, (a, b) in self._t.items()}

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def is_rational(self) -> bool:
        """True when the value is a real rational with no sqrtpi factor."""
        if not self._t:
            return True
        if len(self._t) != 1 or 0 not in self._t:
            return False
        return not self._t[0][1]

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational number")
        if not self._t:
            return Fraction(0)
        a = self._t[0][0]
        return Fraction(int(a.numerator), int(a.denominator))

    def powers(self) -> list:
        return sorted(self._t)

    # ------------------------------------------------------------- arithmetic
    def __add__(self, other):
        o = as_scalar(other)
        if not o._t:
            return self
        if not self._t:
            return o
        t = dict(self._t)
        for k, (a, b) in o._t.items():
            if k in t:
                c, d = t[k]
                c, d = c + a, d + b
                if c or d:
                    t[k] = (c, d)
                else:
                    del t[k]
            else:
                t[k] = (a, b)
        return ExactScalar._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar._raw({k: (-a, -b) for k, (a, b) in self._t.items()})

    def __sub__(self, other):
        return self + (-as_scalar(other))

    def __rsub__(self, other):
        return as_scalar(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, mpq, Fraction)) and not isinstance(other, bool):
            q = mpq(other)
            if not q:
                return ZERO
            return ExactScalar._raw({k: (a * q, b * q) for k, (a, b) in self._t.items()})
        o = as_scalar(other)
        if not self._t or not o._t:
            return ZERO
        t: dict = {}
        for k1, (a1, b1) in self._t.items():
            for k2, (a2, b2) in o._t.items():
                re_p = a1 * a2 - b1 * b2
                im_p = a1 * b2 + a2 * b1
                k = k1 + k2
                if k in t:
                    c, d = t[k]
                    t[k] = (c + re_p, d + im_p)
                else:
                    t[k] = (re_p, im_p)
        return ExactScalar._raw({k: v for k, v in t.items() if v[0] or v[1]})

    __rmul__ = __mul__

    def inverse(self) -> "ExactScalar":
        """Inverse of a nonzero monomial ``c * sqrtpi**k``."""
        if len(self._t) != 1:
            raise ZeroDivisionError(
                "only a single nonzero monomial c*sqrtpi^k can be inverted, got " + str(self))
        (k, (a, b)), = self._t.items()
        n = a * a + b * b
        return ExactScalar._raw({-k: (a / n, -b / n)})

    def __truediv__(self, other):
        if isinstance(other, (int, mpq, Fraction)) and not isinstance(other, bool):
            q = mpq(other)
            if not q:
                raise ZeroDivisionError("division by zero")
            return ExactScalar._raw({k: (a / q, b / q) for k, (a, b) in self._t.items()})
        return self * as_scalar(other).inverse()

    def __rtruediv__(self, other):
        return as_scalar(other) * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("only integer powers")
        if e < 0:
            return self.inverse() ** (-e)
        out = ONE
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conj(self) -> "ExactScalar":
        """Complex conjugate; sqrtpi is real and is fixed."""
        return ExactScalar._raw({k: (a, -b) for k, (a, b) in self._t.items()})

    # -------------------------------------------------------------- comparison
    def __eq__(self, other):
        if isinstance(other, ExactScalar):
            return self._t == other._t
        if isinstance(other, (int, Fraction, mpq)) and not isinstance(other, bool):
            return self._t == ExactScalar(other)._t
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    # --------------------------------------------------------------- numerics
    def to_complex(self) -> complex:
        sp = math.sqrt(math.pi)
        return sum((complex(float(a), float(b)) * sp ** k for k, (a, b) in self._t.items()),
                   complex(0.0))

    def __float__(self):
        z = self.to_complex()
        if z.imag:
            raise ValueError(f"{self} is not real")
        return z.real

    # --------------------------------------------------------------- printing
    def to_text(self) -> str:
        """Exact round-trip format ``(re,im)·sqrtpi^k + ...``."""
        if not self._t:
            return "0"
        return " + ".join(f"({_q(a)},{_q(b)})·sqrtpi^{k}" for k, (a, b) in sorted(self._t.items()))

    @classmethod
    def from_text(cls, text: str) -> "ExactScalar":
        text = text.strip()
        if text == "0":
            return ZERO
        terms = {}
        for part in text.split(" + "):
            m = _TERM_RE.fullmatch(part.strip())
            if not m:
                raise ValueError(f"cannot parse scalar term {part!r}")
            k = int(m.group(3))
            if k in terms:
                raise ValueError(f"repeated power {k} in {text!r}")
            terms[k] = (Fraction(m.group(1)), Fraction(m.group(2)))
        return cls.from_terms(terms)

    def __str__(self) -> str:
        """Display form ``a + b·√π + c·π``."""
        if not self._t:
            return "0"
        parts = []
        for k, (a, b) in sorted(self._t.items()):
            if b and a:
                c = f"({_q(a)}{'+' if b > 0 else '-'}{_q(abs(b))}i)"
            elif b:
                c = f"{_q(b)}i"
            else:
                c = _q(a)
            sym = _pi_symbol(k)
            parts.append(c if not sym else f"{c}·{sym}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"ExactScalar({self.to_text()!r})"


_TERM_RE = re.compile(r"\((-?\d+(?:/\d+)?),(-?\d+(?:/\d+)?)\)·sqrtpi\^(-?\d+)")


def _q(x) -> str:
    x = mpq(x)
    if x.denominator == 1:
        return str(int(x.numerator))
    return f"{int(x.numerator)}/{int(x.denominator)}"


def _pi_symbol(k: int) -> str:
    if k == 0:
        return ""
    if k == 1:
        return "√π"
    if k == 2:
        return "π"
    if k % 2 == 0:
        return f"π^{k // 2}"
    return f"√π^{k}"


ZERO = ExactScalar(0)
ONE = ExactScalar(1)
I = ExactScalar.gaussian(0, 1)
SQRT_PI = ExactScalar(1, power=1)
PI = ExactScalar(1, power=2)


def as_scalar(x) -> ExactScalar:
    if isinstance(x, ExactScalar):
        return x
    return ExactScalar(x)


def pochhammer(a, k: int) -> Fraction:
    """Rising factorial ``a (a+1) ... (a+k-1)``; the empty product is 1."""
    if k < 0:
        raise ValueError("pochhammer needs k >= 0")
    a = Fraction(a)
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


def gamma_half(a) -> ExactScalar:
    """Gamma at a positive integer or half-integer, exactly.

    Gamma(n) = (n-1)! and Gamma(k + 1/2) = (2k)! / (4^k k!) * sqrtpi.
    """
    a = Fraction(a)
    if a <= 0 or (2 * a).denominator != 1:
        raise ValueError(f"gamma_half is only defined at positive (half-)integers, got {a}")
    if a.denominator == 1:
        return ExactScalar(math.factorial(int(a) - 1))
    k = int(a - Fraction(1, 2))
    return ExactScalar(Fraction(math.factorial(2 * k), 4 ** k * math.factorial(k)), power=1)


def gamma_value(a) -> ExactScalar:
    """Gamma at any (half-)integer that is not a pole.

    Negative half-integers are reached from a positive argument by
    Gamma(a) = Gamma(a + r) / (a)_r.  Nonpositive integers raise.
    """
    a = Fraction(a)
    if (2 * a).denominator != 1:
        raise ValueError(f"gamma_value needs a (half-)integer, got {a}")
    if a > 0:
        return gamma_half(a)
    if a.denominator == 1:
        raise ValueError(f"Gamma has a pole at {a}")
    r = int(-a) + 1
    return gamma_half(a + r) / pochhammer(a, r)


def scalar_sum(items: Iterable) -> ExactScalar:
    out = ZERO
    for x in items:
        out = out + x
    return out


# ------------------------------------------------------------ linear algebra
#
# Entries may be Fractions or ExactScalars.  Pivots must be invertible: any
# nonzero Fraction, or an ExactScalar that is a single monomial.  Systems whose
# columns carry a uniform power of sqrtpi always admit such pivots.

def _invertible(x) -> bool:
    if isinstance(x, ExactScalar):
        return x.is_monomial()
    return bool(x)


def row_reduce(rows: list, ncols: int) -> tuple:
    """Reduced row echelon form: returns (rows, pivot columns).

    Pivot columns are chosen left to right, so the basis read off the result
    is deterministic for a fixed column order.
    """
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        blocked = False
        for i in range(r, len(rows)):
            if rows[i][c]:
                if _invertible(rows[i][c]):
                    piv = i
                    break
                blocked = True
        if piv is None:
            if blocked:
                raise ArithmeticError(f"no invertible pivot in column {c}")
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv if x else x for x in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                ri = rows[i]
                rows[i] = [a - f * b if b else a for a, b in zip(ri, pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(rows: list, ncols: int) -> int:
    return len(row_reduce(rows, ncols)[1])


def nullspace(rows: list, ncols: int, zero=None) -> list:
    """Basis of {v : rows . v = 0}, one vector per free column (free entry 1)."""
    zero = Fraction(0) if zero is None else zero
    red, piv = row_reduce(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [zero] * ncols
        v[f] = zero + 1
        for r, pc in zip(red, piv):
            if r[f]:
                v[pc] = -r[f]
        out.append(v)
    return out


def solve(columns: list, target: list, zero=None):
    """Solve sum_j a_j columns[j] = target exactly.

    Returns (coefficients, residual_free) where residual_free is False if the
    target is not in the span.  Columns must be linearly independent.
    """
    zero = Fraction(0) if zero is None else zero
    nrows = len(target)
    ncols = len(columns)
    aug = [[columns[j][i] for j in range(ncols)] + [target[i]] for i in range(nrows)]
    aug = [row for row in aug if any(row)]
    red, piv = row_reduce(aug, ncols + 1)
    if ncols in piv:
        return None, False
    if len(piv) < ncols:
        raise ArithmeticError("columns are linearly dependent")
    coeffs = [zero] * ncols
    for r, pc in zip(red, piv):
        coeffs[pc] = r[ncols]
    return coeffs, True


def render(x) -> str:
    """Report text: exact scalars in round-trip form, anything else via str."""
    if isinstance(x, ExactScalar):
        return x.to_text()
    return str(x)
