"""Symbolic calculus for the renormalised K-Bessel functions.

A :class:`RadialElement` is a finite sum ``c * |X|^m * Khat_k`` where
``Khat_k = Ktilde_{beta0 + k}(|X|)`` and ``Ktilde_a(z) = (z/2)^{-a} K_a(z)``.
The rules used are

    d/dz Ktilde_a = -(z/2) Ktilde_{a+1}
    (z^2/4) Ktilde_{a+1} - a Ktilde_a - Ktilde_{a-1} = 0

and canonical forms keep only the shifts k = 0 and k = 1.  Khat_0 and Khat_1
are treated as independent symbols; every identity checked here follows from
the two rules above for arbitrary order, so a canonical-form equality is a
genuine identity of functions.

A :class:`MixedElement` is a sum of superpolynomials times radial terms on the
model space, reduced modulo R^2 with s^2 + theta^2 = t^2 = |X|^2.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Tuple

import numpy as np
from scipy import special

from .operators import DifferentialOperator, _factors
from .scalars import ONE, ZERO, ExactScalar, as_scalar, gamma_value
from .superpoly import (
    Mono,
    ModelParams,
    Space,
    SuperPolynomial,
    binom,
    mono_mul,
    mono_partial,
)

__all__ = [
    "RadialElement",
    "MixedElement",
    "LaguerreFn",
    "d_radial",
    "laguerre",
    "laguerre_fn",
    "laguerre_identities",
    "laguerre_numeric_oracle",
    "gegenbauer",
    "gegenbauer_space",
    "apply_radial",
    "ktilde",
    "itilde",
]


def _canon_shifts(terms: dict, base: Fraction) -> dict:
    """Rewrite keys (extra, m, k) so that every k is 0 or 1."""
    work = dict(terms)
    out: dict = {}

    def add(d, key, v):
        if key in d:
            s = d[key] + v
            if s:
                d[key] = s
            else:
                del d[key]
        elif v:
            d[key] = v

    while work:
        key = max(work, key=lambda t: abs(t[2] - Fraction(1, 2)))
        v = work.pop(key)
        extra, m, k = key
        if k in (0, 1):
            add(out, key, v)
            continue
        if k >= 2:
            # Khat_k = 4 |X|^{-2} ((b + k - 1) Khat_{k-1} + Khat_{k-2})
            a = base + k - 1
            add(work, (extra, m - 2, k - 1), v * (4 * a))
            add(work, (extra, m - 2, k - 2), v * 4)
        else:
            # Khat_k = (|X|^2 / 4) Khat_{k+2} - (b + k + 1) Khat_{k+1}
            a = base + k + 1
            add(work, (extra, m + 2, k + 2), v * Fraction(1, 4))
            add(work, (extra, m, k + 1), v * (-a))
    return out


class RadialElement:
    """Finite combination of |X|^m Ktilde_{base+k}(|X|), kept canonical."""

    __slots__ = ("base", "terms")

    def __init__(self, base, terms: Dict[Tuple[int, int], ExactScalar] | None = None, canonical=False):
        self.base = Fraction(base)
        t = {(None, m, k): as_scalar(c) for (m, k), c in (terms or {}).items() if c}
        if not canonical:
            t = _canon_shifts(t, self.base)
        self.terms = {(m, k): c for (_, m, k), c in t.items() if c}

    @classmethod
    def K(cls, base, k: int = 0, m: int = 0, c=1) -> "RadialElement":
        return cls(base, {(m, k): as_scalar(c)})

    @classmethod
    def zero(cls, base) -> "RadialElement":
        return cls(base, {}, canonical=True)

    def _same(self, other: "RadialElement"):
        if self.base != other.base:
            raise ValueError("radial elements with different base orders")

    def __add__(self, other):
        self._same(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t[k] + v if k in t else v
        return RadialElement(self.base, {k: v for k, v in t.items() if v}, canonical=True)

    def __neg__(self):
        return RadialElement(self.base, {k: -v for k, v in self.terms.items()}, canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "RadialElement":
        c = as_scalar(c)
        return RadialElement(self.base, {k: v * c for k, v in self.terms.items() if v * c}, canonical=True)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def times_power(self, m: int) -> "RadialElement":
        """Multiply by |X|^m."""
        return RadialElement(self.base, {(a + m, k): v for (a, k), v in self.terms.items()}, canonical=True)

    def shift_base(self, base) -> "RadialElement":
        """Same function written over another base order (must differ by an integer)."""
        base = Fraction(base)
        d = self.base - base
        if d.denominator != 1:
            raise ValueError("base orders must differ by an integer")
        return RadialElement(base, {(m, k + int(d)): v for (m, k), v in self.terms.items()})

    def d(self) -> "RadialElement":
        return d_radial(self)

    def euler(self) -> "RadialElement":
        """|X| d/d|X|."""
        return d_radial(self).times_power(1)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, RadialElement):
            return NotImplemented
        return self.base == other.base and self.terms == other.terms

    def __hash__(self):
        return hash((self.base, frozenset(self.terms.items())))

    def evaluate(self, x: float) -> float:
        """Double-precision value at |X| = x using scipy's K-Bessel."""
        tot = 0.0
        for (m, k), c in self.terms.items():
            z = c.to_complex()
            tot += z.real * x ** m * ktilde(float(self.base + k), x)
        return tot

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})·|X|^{m}·K̂{k}" for (m, k), c in sorted(self.terms.items()))

    __repr__ = __str__


def d_radial(f: RadialElement) -> RadialElement:
    """d/d|X|: (z^m Khat_k)' = m z^{m-1} Khat_k - (1/2) z^{m+1} Khat_{k+1}."""
    t: dict = {}
    for (m, k), c in f.terms.items():
        if m:
            key = (m - 1, k)
            t[key] = t.get(key, ZERO) + c * m
        key = (m + 1, k + 1)
        t[key] = t.get(key, ZERO) + c * Fraction(-1, 2)
    return RadialElement(f.base, {k: v for k, v in t.items() if v})


# ------------------------------------------------------------------ numerics

def ktilde(a: float, x):
    """(x/2)^{-a} K_a(x) for x > 0 or complex x with positive real part."""
    return (x / 2) ** (-a) * special.kv(a, x)


def itilde(a: float, z, terms: int = 60):
    """(z/2)^{-a} I_a(z) from its power series (entire in z, 1/Gamma vanishes at poles)."""
    w = (z / 2) ** 2
    out = 0
    term = 1.0
    for nn in range(terms):
        out = out + term * special.rgamma(nn + a + 1)
        term = term * w / (nn + 1)
    return out


# ------------------------------------------------------------------ Laguerre

class LaguerreFn:
    """Lambda^{mu,nu}_{2,j} with its canonical radial expansion."""

    def __init__(self, mu, nu, j: int, element: RadialElement):
        self.mu = Fraction(mu)
        self.nu = Fraction(nu)
        self.j = j
        self.element = element

    def __repr__(self):
        return f"Λ^{{{self.mu},{self.nu}}}_{{2,{self.j}}} = {self.element}"


def _rgamma_exact(a: Fraction) -> ExactScalar:
    """1/Gamma(a) at a (half-)integer; zero at the poles."""
    if a <= 0 and a.denominator == 1:
        return ZERO
    return ONE / gamma_value(a)


_LAG_LOCK = threading.Lock()
_LAG_CACHE: Dict[tuple, RadialElement] = {}


def laguerre(mu, nu, j: int, base=None, strict: bool = True) -> RadialElement:
    """Lambda^{mu,nu}_{2,j}(|X|) over base order ``base`` (default nu/2).

    Built from Lambda_0 = Ktilde_{nu/2} / Gamma((mu+2)/2),
    Lambda_1 = (E + (mu+nu+2)/2) Lambda_0 and, for j >= 1,
    (j+1)(j+mu+1) Lambda_{j+1}
        = (2j+mu+1)(E + (mu+nu+2)/2) Lambda_j + (j+(mu+nu)/2)(j+(mu-nu)/2) Lambda_{j-1}.
    With ``strict`` the nu in -2N case is rejected.
    """
    mu, nu = Fraction(mu), Fraction(nu)
    base = nu / 2 if base is None else Fraction(base)
    if strict and nu <= 0 and nu.denominator == 1 and nu % 2 == 0:
        raise ValueError(f"nu = {nu} lies in -2N, where the module W is not considered")
    if (2 * mu).denominator != 1 or (2 * nu).denominator != 1:
        raise ValueError("mu and nu must be (half-)integers")
    if j < 0:
        return RadialElement.zero(base)
    key = (mu, nu, j, base)
    with _LAG_LOCK:
        if key in _LAG_CACHE:
            return _LAG_CACHE[key]
    shift = nu / 2 - base
    if shift.denominator != 1:
        raise ValueError("base order must differ from nu/2 by an integer")
    c = (mu + nu + 2) / 2
    if j == 0:
        res = RadialElement.K(base, int(shift), c=_rgamma_exact((mu + 2) / 2))
    elif j == 1:
        l0 = laguerre(mu, nu, 0, base, strict)
        res = l0.euler() + l0.scale(c)
    else:
        jj = j - 1
        den = (jj + 1) * (jj + mu + 1)
        if den == 0:
            raise ZeroDivisionError(f"recursion for Λ^{{{mu},{nu}}} breaks down at j={j}")
        lj = laguerre(mu, nu, jj, base, strict)
        lm = laguerre(mu, nu, jj - 1, base, strict)
        res = (lj.euler() + lj.scale(c)).scale(2 * jj + mu + 1) \
            + lm.scale((jj + (mu + nu) / 2) * (jj + (mu - nu) / 2))
        res = res.scale(1 / den)
    with _LAG_LOCK:
        _LAG_CACHE[key] = res
    return res


def laguerre_fn(mu, nu, j: int, base=None, strict: bool = True) -> LaguerreFn:
    return LaguerreFn(mu, nu, j, laguerre(mu, nu, j, base, strict))


def laguerre_identities(mu, nu, j: int, strict: bool = False) -> Dict[str, Tuple[RadialElement, RadialElement]]:
    """Both sides of the four differential recurrences and the E-recursion at j.

    All functions are written over the common base nu/2 - 1 so that the
    nu - 2 shift is representable.
    """
    mu, nu = Fraction(mu), Fraction(nu)
    base = nu / 2 - 1

    def L(a, b, k):
        return laguerre(a, b, k, base, strict=strict)

    lam = L(mu, nu, j)
    d1 = lam.d()
    d2 = d1.d()
    e = lam.euler()
    out = {}
    lhs = d2 + d1.times_power(-1).scale(nu + 1) - lam
    rhs = L(mu + 2, nu, j - 1).scale(j + mu + 1)
    out["laguerre-1"] = (lhs, rhs)
    lhs = d2 + d1.times_power(-1).scale(mu + 1) - lam
    rhs = L(mu, nu + 2, j).scale(-(j + (mu - nu) / 2))
    out["laguerre-2"] = (lhs, rhs)
    if mu - 2 >= -1:
        lhs = (lam.scale(mu + nu) + e.scale(2)).scale(mu) + L(mu + 2, nu, j - 1).times_power(2).scale(j + mu + 1)
        rhs = L(mu - 2, nu, j + 1).scale(4 * (j + 1))
        out["laguerre-3"] = (lhs, rhs)
    lhs = (lam.scale(mu + nu) + e.scale(2)).scale(nu) + L(mu, nu + 2, j).times_power(2).scale(-j - (mu - nu) / 2)
    rhs = L(mu, nu - 2, j).scale(-4 * (j + (mu + nu) / 2))
    out["laguerre-4"] = (lhs, rhs)
    c = (mu + nu + 2) / 2
    lhs = (e + lam.scale(c)).scale(2 * j + mu + 1)
    rhs = L(mu, nu, j + 1).scale((j + 1) * (j + mu + 1)) - L(mu, nu, j - 1).scale((j + (mu + nu) / 2) * (j + (mu - nu) / 2))
    out["action-Le"] = (lhs, rhs)
    return out


def laguerre_numeric_oracle(mu, nu, j: int, x: float, t_truncation: int = 64, radius: float = 0.25) -> float:
    """Lambda^{mu,nu}_{2,j}(x) as the t^j Taylor coefficient of the generating function.

    G(t, x) = (1-t)^{-(mu+nu+2)/2} Itilde_{mu/2}(t x/(1-t)) Ktilde_{nu/2}(x/(1-t)),
    sampled on the circle |t| = radius at ``t_truncation`` points (discrete
    Cauchy integral).  Aliasing error is of order radius^t_truncation.
    """
    if x <= 0:
        raise ValueError("x must be positive")
    mu, nu = float(mu), float(nu)
    N = int(t_truncation)
    ts = radius * np.exp(2j * np.pi * np.arange(N) / N)
    vals = []
    for t in ts:
        w = x / (1 - t)
        g = (1 - t) ** (-(mu + nu + 2) / 2) * itilde(mu / 2, t * x / (1 - t)) * ktilde(nu / 2, w)
        vals.append(g)
    vals = np.array(vals)
    if not np.all(np.isfinite(vals)):
        raise OverflowError("generating function overflowed on the sampling circle")
    coeff = np.sum(vals * np.exp(-2j * np.pi * j * np.arange(N) / N)) / N / radius ** j
    return float(coeff.real)


# ------------------------------------------------------------------ Gegenbauer

def gegenbauer_space() -> Space:
    return Space([1], 0, ["z"])


@lru_cache(maxsize=None)
def gegenbauer(lam, n: int) -> SuperPolynomial:
    """Normalised Gegenbauer polynomial Gamma(lam) C^lam_n(z).

    Sum_i (-1)^i Gamma(lam + n - i) / (i! (n-2i)!) (2z)^{n-2i}; a pole of any
    Gamma factor raises.
    """
    lam = Fraction(lam)
    sp = gegenbauer_space()
    if n < 0:
        return SuperPolynomial.zero(sp)
    t = {}
    for i in range(n // 2 + 1):
        g = gamma_value(lam + n - i)
        c = g * Fraction((-1) ** i * 2 ** (n - 2 * i), math.factorial(i) * math.factorial(n - 2 * i))
        if c:
            t[(n - 2 * i,)] = c
    return SuperPolynomial(sp, t)


# ------------------------------------------------------------------ mixed elements

def _q_poly(params: ModelParams) -> SuperPolynomial:
    """Q = (s^2 + t^2 + theta^2)/2, so that |X| = sqrt(Q) off the orbit."""
    sp = params.space
    from .superpoly import r_squared
    r2 = r_squared(sp)
    # s^2 + t^2 + theta^2 is R^2 with the y-signs flipped
    t = {}
    for a, c in r2.terms.items():
        if any(a[i] for i in params.y_indices):
            c = -c
        t[a] = c * Fraction(1, 2)
    return SuperPolynomial(sp, t)


@lru_cache(maxsize=None)
def _dq(params: ModelParams, i: int) -> Tuple[Tuple[Mono, ExactScalar], ...]:
    return tuple(_q_poly(params).partial(i).terms.items())


@lru_cache(maxsize=None)
def _elim_data(params: ModelParams):
    sp = params.space
    ix = params.x_index(1)
    iy = params.y_index(params.q - 1)
    ay = SuperPolynomial.zero(sp)
    for j in range(1, params.q - 1):
        ay = ay + params.y(j) * params.y(j)
    ax = SuperPolynomial.zero(sp)
    for i in range(2, params.p):
        ax = ax + params.x(i) * params.x(i)
    theta2 = SuperPolynomial.zero(sp)
    for (a, b), v in sp.beta_up.items():
        if a >= sp.m:
            theta2 = theta2 + (SuperPolynomial.variable(sp, a) * SuperPolynomial.variable(sp, b)).scale(v)
    ax = ax + theta2
    return ix, iy, ax, ay


@lru_cache(maxsize=None)
def _neg_power(params: ModelParams, which: str, r: int) -> SuperPolynomial:
    ix, iy, ax, ay = _elim_data(params)
    A = ax if which == "x" else ay
    out = SuperPolynomial.constant(params.space, 1)
    for _ in range(r):
        out = out * (-A)
    return out


@lru_cache(maxsize=1 << 16)
def _reduce_mono(params: ModelParams, a: Mono) -> Tuple[Tuple[Mono, int, ExactScalar], ...]:
    """x_1^2 -> |X|^2 - (other s^2) - theta^2 and y_{q-1}^2 -> |X|^2 - (other t^2)."""
    ix, iy, _, _ = _elim_data(params)
    ex, ey = a[ix], a[iy]
    if ex < 2 and ey < 2:
        return ((a, 0, ONE),)
    sp = params.space
    base = list(a)
    base[ix] = ex % 2
    base[iy] = ey % 2
    ax_pow, ay_pow = ex // 2, ey // 2
    out: Dict[Tuple[Mono, int], ExactScalar] = {}
    for rx in range(ax_pow + 1):
        px = _neg_power(params, "x", rx).scale(binom(ax_pow, rx))
        for ry in range(ay_pow + 1):
            py = _neg_power(params, "y", ry).scale(binom(ay_pow, ry))
            z = 2 * ((ax_pow - rx) + (ay_pow - ry))
            prod = SuperPolynomial._raw(sp, {tuple(base): ONE}) * px * py
            for b, c in prod.terms.items():
                key = (b, z)
                out[key] = out[key] + c if key in out else c
    return tuple((b, z, c) for (b, z), c in out.items() if c)


class MixedElement:
    """Sum of (monomial) * |X|^m * Khat_k on the model space, canonical mod R^2."""

    __slots__ = ("params", "base", "terms")

    def __init__(self, params: ModelParams, base, terms: dict | None = None, canonical: bool = False):
        self.params = params
        self.base = Fraction(base)
        terms = {k: v for k, v in (terms or {}).items() if v}
        self.terms = terms if canonical else _canonicalize(params, self.base, terms)

    @classmethod
    def from_parts(cls, poly: SuperPolynomial, radial: RadialElement, params: ModelParams) -> "MixedElement":
        t: dict = {}
        for a, c in poly.terms.items():
            for (m, k), r in radial.terms.items():
                key = (a, m, k)
                t[key] = t[key] + c * r if key in t else c * r
        return cls(params, radial.base, t)

    @classmethod
    def zero(cls, params: ModelParams, base) -> "MixedElement":
        return cls(params, base, {}, canonical=True)

    def _same(self, other):
        if self.params != other.params or self.base != other.base:
            raise ValueError("mixed elements over different data")

    def __add__(self, other):
        self._same(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            if k in t:
                s = t[k] + v
                if s:
                    t[k] = s
                else:
                    del t[k]
            else:
                t[k] = v
        return MixedElement(self.params, self.base, t, canonical=True)

    def __neg__(self):
        return MixedElement(self.params, self.base, {k: -v for k, v in self.terms.items()}, canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "MixedElement":
        c = as_scalar(c)
        if not c:
            return MixedElement.zero(self.params, self.base)
        return MixedElement(self.params, self.base, {k: v * c for k, v in self.terms.items()}, canonical=True)

    def times_poly(self, f: SuperPolynomial) -> "MixedElement":
        """f * self (f on the left)."""
        m = self.params.space.m
        t: dict = {}
        for b, cb in f.terms.items():
            for (a, mm, k), c in self.terms.items():
                s, r = mono_mul(b, a, m)
                if not s:
                    continue
                key = (r, mm, k)
                v = cb * c * s
                t[key] = t[key] + v if key in t else v
        return MixedElement(self.params, self.base, t)

    def conj(self) -> "MixedElement":
        return MixedElement(self.params, self.base, {k: v.conj() for k, v in self.terms.items()}, canonical=True)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MixedElement):
            return NotImplemented
        return self.params == other.params and self.base == other.base and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def parity(self) -> int:
        m = self.params.space.m
        ps = {sum(a[m:]) & 1 for (a, _, _) in self.terms}
        if len(ps) > 1:
            raise ValueError("element is not homogeneous")
        return ps.pop() if ps else 0

    def min_power(self) -> int:
        return min((mm for (_, mm, _) in self.terms), default=0)

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.params.space.names
        parts = []
        for (a, mm, k), c in sorted(self.terms.items(), key=lambda kv: (kv[0][1], kv[0][2], kv[0][0])):
            mono = "·".join(names[i] + (f"^{e}" if e > 1 else "") for i, e in enumerate(a) if e) or "1"
            parts.append(f"({c})·{mono}·|X|^{mm}·K̂{k}")
        return " + ".join(parts)

    __repr__ = __str__


def _canonicalize(params: ModelParams, base: Fraction, terms: dict) -> dict:
    t = _canon_shifts(terms, base)
    out: dict = {}
    for (a, mm, k), c in t.items():
        for b, z, cz in _reduce_mono(params, a):
            key = (b, mm + z, k)
            v = c * cz
            if key in out:
                s = out[key] + v
                if s:
                    out[key] = s
                else:
                    del out[key]
            else:
                out[key] = v
    return out


@lru_cache(maxsize=1 << 18)
def _deriv_term(params: ModelParams, alpha: Mono, a: Mono, mm: int) -> Tuple[Tuple[Mono, int, int, ExactScalar], ...]:
    """d^alpha (x^a |X|^mm Khat_k) as (mono, power, shift increment, coeff), ambient."""
    sp = params.space
    m = sp.m
    cur: Dict[Tuple[Mono, int, int], ExactScalar] = {(a, mm, 0): ONE}
    for i in reversed(_factors(alpha)):
        nxt: Dict[Tuple[Mono, int, int], ExactScalar] = {}

        def add(key, v):
            if key in nxt:
                nxt[key] = nxt[key] + v
            else:
                nxt[key] = v

        odd_i = i >= m
        for (b, p, dk), c in cur.items():
            s, b2 = mono_partial(b, i, m)
            if s:
                add((b2, p, dk), c * s)
            sign = -1 if (odd_i and sum(b[m:]) & 1) else 1
            for q, cq in _dq(params, i):
                s2, bq = mono_mul(b, q, m)
                if not s2:
                    continue
                w = c * cq * (sign * s2)
                # (1/(2|X|)) d/d|X| (|X|^p Khat) = (p/2)|X|^{p-2} Khat - (1/4)|X|^p Khat_{+1}
                if p:
                    add((bq, p - 2, dk), w * Fraction(p, 2))
                add((bq, p, dk + 1), w * Fraction(-1, 4))
        cur = {k: v for k, v in nxt.items() if v}
    return tuple((b, p, dk, c) for (b, p, dk), c in cur.items())


def apply_radial(D: DifferentialOperator, f: MixedElement) -> MixedElement:
    """Apply D to the canonical representative of f by the radial chain rule, then reduce."""
    params = f.params
    sp = params.space
    if D.space is not sp:
        raise ValueError("operator does not act on the model space")
    m = sp.m
    out: dict = {}
    for (x, alpha), cd in D.flat.items():
        for (a, mm, k), c in f.terms.items():
            cc = cd * c
            for b, p, dk, v in _deriv_term(params, alpha, a, mm):
                s, r = mono_mul(x, b, m)
                if not s:
                    continue
                key = (r, p, k + dk)
                w = cc * v * s
                out[key] = out[key] + w if key in out else w
    return MixedElement(params, f.base, {k: v for k, v in out.items() if v})
