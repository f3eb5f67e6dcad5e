"""Supercommutative polynomials with an orthosymplectic metric.

Variables are ordered even first, then odd.  A monomial is a tuple of
exponents; odd exponents are 0 or 1 and the monomial stands for the ordered
product of its variables in increasing index.  Multiplying two monomials
reorders the odd factors and picks up the Koszul sign.

The metric has a diagonal even block of signs and the standard symplectic odd
block ``[[0, I_n], [-I_n, 0]]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

from .scalars import ONE, ZERO, ExactScalar, as_scalar

__all__ = [
    "Space",
    "ModelParams",
    "SuperPolynomial",
    "mono_mul",
    "mono_partial",
    "r_squared",
    "euler",
    "laplacian",
    "reduce_mod_r2",
    "partial",
    "partial_lower",
]

Mono = Tuple[int, ...]


class Space:
    """Variable set ``R^{m|2n}`` with metric; instances are interned."""

    _cache: Dict[tuple, "Space"] = {}

    def __new__(cls, even_signs: Sequence[int], n_pairs: int, names: Sequence[str] | None = None):
        even_signs = tuple(int(s) for s in even_signs)
        if any(s not in (1, -1) for s in even_signs):
            raise ValueError("even metric signs must be +1 or -1")
        if n_pairs < 0:
            raise ValueError("n_pairs must be nonnegative")
        m = len(even_signs)
        if names is None:
            names = [f"u{i + 1}" for i in range(m)] + [f"θ{i + 1}" for i in range(2 * n_pairs)]
        names = tuple(names)
        if len(names) != m + 2 * n_pairs:
            raise ValueError("wrong number of variable names")
        key = (even_signs, n_pairs, names)
        if key in cls._cache:
            return cls._cache[key]
        self = object.__new__(cls)
        self.even_signs = even_signs
        self.m = m
        self.n = n_pairs
        self.nvars = m + 2 * n_pairs
        self.names = names
        self._build_metric()
        cls._cache[key] = self
        return self

    def _build_metric(self):
        m, n = self.m, self.n
        low: Dict[Tuple[int, int], int] = {}
        up: Dict[Tuple[int, int], int] = {}
        for i, s in enumerate(self.even_signs):
            low[(i, i)] = s
            up[(i, i)] = s
        for a in range(n):
            i, j = m + a, m + n + a
            low[(i, j)] = 1
            low[(j, i)] = -1
            up[(i, j)] = -1
            up[(j, i)] = 1
        self.beta_low = low
        self.beta_up = up
        # raised-index coordinate x^j = sum_i x_i beta^{ij}
        self.x_up = [[(i, up[(i, j)]) for i in range(self.nvars) if (i, j) in up]
                     for j in range(self.nvars)]
        # lowered derivative d_j = sum_i d^i beta_{ji}
        self.d_low = [[(i, low[(j, i)]) for i in range(self.nvars) if (j, i) in low]
                      for j in range(self.nvars)]

    def parity(self, i: int) -> int:
        return 0 if i < self.m else 1

    @property
    def superdim(self) -> int:
        return self.m - 2 * self.n

    def zero_mono(self) -> Mono:
        return (0,) * self.nvars

    def unit(self, i: int) -> Mono:
        e = [0] * self.nvars
        e[i] = 1
        return tuple(e)

    def metric_matrix(self) -> List[List[int]]:
        return [[self.beta_low.get((i, j), 0) for j in range(self.nvars)] for i in range(self.nvars)]

    def inverse_metric_matrix(self) -> List[List[int]]:
        return [[self.beta_up.get((i, j), 0) for j in range(self.nvars)] for i in range(self.nvars)]

    def __repr__(self):
        return f"Space(m={self.m}, 2n={2 * self.n})"


@dataclass(frozen=True)
class ModelParams:
    """The triple (p, q, n) with the derived constants used throughout."""

    p: int
    q: int
    n: int

    def __post_init__(self):
        for name in ("p", "q", "n"):
            if not isinstance(getattr(self, name), int):
                raise TypeError(f"{name} must be an integer")
        if self.p < 2 or self.q < 2:
            raise ValueError(f"need p >= 2 and q >= 2, got p={self.p}, q={self.q}")
        if self.n < 0:
            raise ValueError(f"need n >= 0, got n={self.n}")

    @property
    def m(self) -> int:
        return self.p + self.q - 2

    @property
    def M(self) -> int:
        return self.p + self.q - 2 - 2 * self.n

    @property
    def mu(self) -> int:
        return max(self.p - 2 * self.n - 3, self.q - 3)

    @property
    def nu(self) -> int:
        return min(self.p - 2 * self.n - 3, self.q - 3)

    @property
    def split(self) -> bool:
        """True when p - 2n >= q, i.e. the x/theta block carries mu."""
        return self.p - 2 * self.n >= self.q

    @property
    def space(self) -> Space:
        names = ([f"x{i}" for i in range(1, self.p)] + [f"y{i}" for i in range(1, self.q)]
                 + [f"θ{i}" for i in range(1, 2 * self.n + 1)])
        return Space([1] * (self.p - 1) + [-1] * (self.q - 1), self.n, names)

    # 1-based variable indices: x1..x_{p-1}, y1..y_{q-1}, θ1..θ_{2n}
    def x_index(self, i: int) -> int:
        if not 1 <= i <= self.p - 1:
            raise IndexError(f"x{i} does not exist")
        return i - 1

    def y_index(self, i: int) -> int:
        if not 1 <= i <= self.q - 1:
            raise IndexError(f"y{i} does not exist")
        return self.p - 2 + i

    def theta_index(self, i: int) -> int:
        if not 1 <= i <= 2 * self.n:
            raise IndexError(f"θ{i} does not exist")
        return self.m + i - 1

    def x(self, i: int) -> "SuperPolynomial":
        return SuperPolynomial.variable(self.space, self.x_index(i))

    def y(self, i: int) -> "SuperPolynomial":
        return SuperPolynomial.variable(self.space, self.y_index(i))

    def theta(self, i: int) -> "SuperPolynomial":
        return SuperPolynomial.variable(self.space, self.theta_index(i))

    @property
    def x_indices(self) -> List[int]:
        return list(range(self.p - 1))

    @property
    def y_indices(self) -> List[int]:
        return list(range(self.p - 1, self.m))

    @property
    def theta_indices(self) -> List[int]:
        return list(range(self.m, self.m + 2 * self.n))

    def __str__(self):
        return f"(p,q,n)=({self.p},{self.q},{self.n})"


# ---------------------------------------------------------------- monomials

@lru_cache(maxsize=1 << 20)
def mono_mul(a: Mono, b: Mono, m: int) -> Tuple[int, Mono]:
    """Product of ordered monomials: returns (sign, monomial), sign 0 if it vanishes.

    ``m`` is the number of even variables (odd variables start at index m).
    """
    sign = 1
    nv = len(a)
    # count pairs (i in a, j in b) with i > j, both odd
    cnt = 0
    for j in range(m, nv):
        if b[j]:
            if a[j]:
                return 0, a
            for i in range(j + 1, nv):
                if a[i]:
                    cnt += 1
    if cnt & 1:
        sign = -1
    return sign, tuple(x + y for x, y in zip(a, b))


@lru_cache(maxsize=1 << 20)
def mono_partial(a: Mono, i: int, m: int) -> Tuple[int, Mono]:
    """Left derivative d/dx_i of an ordered monomial: (coefficient, monomial)."""
    e = a[i]
    if e == 0:
        return 0, a
    b = a[:i] + (e - 1,) + a[i + 1:]
    if i < m:
        return e, b
    cnt = 0
    for k in range(m, i):
        if a[k]:
            cnt += 1
    return (-1 if cnt & 1 else 1), b


def mono_parity(a: Mono, m: int) -> int:
    return sum(a[m:]) & 1


def mono_degree(a: Mono) -> int:
    return sum(a)


# ---------------------------------------------------------------- polynomials

class SuperPolynomial:
    """Finite map from monomials to ExactScalar coefficients."""

    __slots__ = ("space", "terms")

    def __init__(self, space: Space, terms: Dict[Mono, ExactScalar] | None = None):
        self.space = space
        self.terms = {} if terms is None else {k: v for k, v in terms.items() if v}

    @classmethod
    def _raw(cls, space: Space, terms: dict) -> "SuperPolynomial":
        obj = object.__new__(cls)
        obj.space = space
        obj.terms = terms
        return obj

    # constructors
    @classmethod
    def zero(cls, space: Space) -> "SuperPolynomial":
        return cls._raw(space, {})

    @classmethod
    def constant(cls, space: Space, c=1) -> "SuperPolynomial":
        c = as_scalar(c)
        return cls._raw(space, {space.zero_mono(): c} if c else {})

    @classmethod
    def variable(cls, space: Space, i: int) -> "SuperPolynomial":
        return cls._raw(space, {space.unit(i): ONE})

    @classmethod
    def monomial(cls, space: Space, exps: Sequence[int], c=1) -> "SuperPolynomial":
        exps = tuple(exps)
        if len(exps) != space.nvars or any(e < 0 for e in exps) or any(e > 1 for e in exps[space.m:]):
            raise ValueError(f"invalid exponent vector {exps}")
        c = as_scalar(c)
        return cls._raw(space, {exps: c} if c else {})

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(k) for k in self.terms}) <= 1

    def parity(self) -> int:
        """Parity of a homogeneous element; raises if mixed."""
        ps = {mono_parity(k, self.space.m) for k in self.terms}
        if len(ps) > 1:
            raise ValueError("polynomial is not homogeneous in parity")
        return ps.pop() if ps else 0

    def homogeneous_part(self, k: int) -> "SuperPolynomial":
        return SuperPolynomial._raw(self.space, {a: c for a, c in self.terms.items() if sum(a) == k})

    def coefficient(self, exps: Sequence[int]) -> ExactScalar:
        return self.terms.get(tuple(exps), ZERO)

    def _check(self, other: "SuperPolynomial"):
        if other.space is not self.space:
            raise ValueError("polynomials live in different spaces")

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, SuperPolynomial):
            other = SuperPolynomial.constant(self.space, other)
        self._check(other)
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
        return SuperPolynomial._raw(self.space, t)

    __radd__ = __add__

    def __neg__(self):
        return SuperPolynomial._raw(self.space, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, SuperPolynomial):
            other = SuperPolynomial.constant(self.space, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "SuperPolynomial":
        c = as_scalar(c)
        if not c:
            return SuperPolynomial.zero(self.space)
        return SuperPolynomial._raw(self.space, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SuperPolynomial):
            return self.scale(other)
        self._check(other)
        m = self.space.m
        t: dict = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                s, c = mono_mul(a, b, m)
                if not s:
                    continue
                v = ca * cb
                if s < 0:
                    v = -v
                if c in t:
                    t[c] = t[c] + v
                else:
                    t[c] = v
        return SuperPolynomial._raw(self.space, {k: v for k, v in t.items() if v})

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        return self.scale(ONE / as_scalar(c))

    def __pow__(self, e: int):
        out = SuperPolynomial.constant(self.space, 1)
        for _ in range(e):
            out = out * self
        return out

    def conj(self) -> "SuperPolynomial":
        return SuperPolynomial._raw(self.space, {k: v.conj() for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, SuperPolynomial):
            return self.space is other.space and self.terms == other.terms
        if isinstance(other, (int, ExactScalar)):
            return self == SuperPolynomial.constant(self.space, other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # derivatives
    def partial(self, i: int) -> "SuperPolynomial":
        """Raised-index derivative d^i (derivative with respect to x_i)."""
        m = self.space.m
        t: dict = {}
        for a, c in self.terms.items():
            s, b = mono_partial(a, i, m)
            if not s:
                continue
            v = c * s
            t[b] = t[b] + v if b in t else v
        return SuperPolynomial._raw(self.space, {k: v for k, v in t.items() if v})

    def partial_lower(self, j: int) -> "SuperPolynomial":
        """Lowered-index derivative d_j = sum_i d^i beta_{ji}."""
        out = SuperPolynomial.zero(self.space)
        for i, b in self.space.d_low[j]:
            out = out + self.partial(i).scale(b)
        return out

    # rendering
    def sorted_terms(self) -> List[Tuple[Mono, ExactScalar]]:
        """Graded lexicographic order, x's before y's before theta's."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for a, c in self.sorted_terms():
            mono = "·".join(
                self.space.names[i] + (f"^{e}" if e > 1 else "") for i, e in enumerate(a) if e)
            cs = str(c)
            if not mono:
                out.append(cs)
            elif c == ONE:
                out.append(mono)
            elif c == -ONE:
                out.append("-" + mono)
            else:
                out.append(f"({cs})·{mono}")
        return " + ".join(out)

    def __repr__(self):
        return f"SuperPolynomial({self})"


# ------------------------------------------------------------ special elements

def _raised_variable(space: Space, j: int) -> SuperPolynomial:
    out = SuperPolynomial.zero(space)
    for i, b in space.x_up[j]:
        out = out + SuperPolynomial.variable(space, i).scale(b)
    return out


def r_squared(space: Space) -> SuperPolynomial:
    """R^2 = sum_{ij} beta^{ij} x_i x_j."""
    out = SuperPolynomial.zero(space)
    for (i, j), b in space.beta_up.items():
        out = out + (SuperPolynomial.variable(space, i) * SuperPolynomial.variable(space, j)).scale(b)
    return out


def partial(i: int, f: SuperPolynomial) -> SuperPolynomial:
    return f.partial(i)


def partial_lower(j: int, f: SuperPolynomial) -> SuperPolynomial:
    return f.partial_lower(j)


def euler(f: SuperPolynomial) -> SuperPolynomial:
    """E f = sum_i x^i d_i f = k f on P_k."""
    t = {}
    for a, c in f.terms.items():
        k = sum(a)
        if k:
            t[a] = c * k
    return SuperPolynomial._raw(f.space, t)


def laplacian(f: SuperPolynomial) -> SuperPolynomial:
    """Delta = sum_{ij} beta^{ij} d_i d_j."""
    space = f.space
    out = SuperPolynomial.zero(space)
    for (i, j), b in space.beta_up.items():
        out = out + f.partial_lower(j).partial_lower(i).scale(b)
    return out


# ------------------------------------------------------------- mod R^2

_Q_POWERS: Dict[Tuple[ModelParams, int], SuperPolynomial] = {}


def _elim_power(params: ModelParams, k: int) -> SuperPolynomial:
    """(s^2 - sum_{j<q-1} y_j^2 + theta^2)^k, the replacement for y_{q-1}^{2k}."""
    key = (params, k)
    if key not in _Q_POWERS:
        sp = params.space
        if k == 0:
            val = SuperPolynomial.constant(sp, 1)
        else:
            val = _elim_power(params, k - 1) * _elim_poly(params)
        _Q_POWERS[key] = val
    return _Q_POWERS[key]


def _elim_poly(params: ModelParams) -> SuperPolynomial:
    sp = params.space
    r2 = r_squared(sp)
    yl = params.y_index(params.q - 1)
    # R^2 = (stuff) - y_{q-1}^2, so y_{q-1}^2 = R^2 restricted to the other monomials
    sq = tuple(2 if i == yl else 0 for i in range(sp.nvars))
    rest = SuperPolynomial._raw(sp, {a: c for a, c in r2.terms.items() if a != sq})
    assert r2.terms[sq] == ExactScalar(-1)
    return rest


def reduce_mod_r2(f: SuperPolynomial, params: ModelParams) -> SuperPolynomial:
    """Canonical representative of f + <R^2>: no monomial has y_{q-1}^2."""
    sp = params.space
    if f.space is not sp:
        raise ValueError("polynomial is not in the model space of these parameters")
    yl = params.y_index(params.q - 1)
    t: dict = {}
    out_extra = SuperPolynomial.zero(sp)
    for a, c in f.terms.items():
        e = a[yl]
        if e < 2:
            t[a] = t[a] + c if a in t else c
            continue
        base = a[:yl] + (e % 2,) + a[yl + 1:]
        out_extra = out_extra + SuperPolynomial._raw(sp, {base: c}) * _elim_power(params, e // 2)
    res = SuperPolynomial._raw(sp, {k: v for k, v in t.items() if v})
    return res + out_extra


def binom(a: int, b: int) -> int:
    """Binomial coefficient that vanishes for a negative top entry."""
    if b < 0 or a < b or a < 0:
        return 0
    return math.comb(a, b)


def monomials_of_degree(space: Space, k: int) -> List[Mono]:
    """All monomials of total degree k, in graded-lex order (x1 most significant)."""
    out: List[Mono] = []
    m, nv = space.m, space.nvars

    def rec(i, remaining, cur):
        if i == nv:
            if remaining == 0:
                out.append(tuple(cur))
            return
        top = remaining if i < m else min(1, remaining)
        for e in range(top, -1, -1):
            cur.append(e)
            rec(i + 1, remaining - e, cur)
            cur.pop()

    rec(0, k, [])
    return out


def poly_sum(items: Iterable[SuperPolynomial], space: Space) -> SuperPolynomial:
    t: dict = {}
    for f in items:
        for k, v in f.terms.items():
            t[k] = t[k] + v if k in t else v
    return SuperPolynomial._raw(space, {k: v for k, v in t.items() if v})
