"""Differential operators with superpolynomial coefficients.

An operator is stored in normal order, multiplications left of derivatives,
as a flat map ``(coefficient monomial, derivative monomial) -> scalar``.
Derivative monomials use raised-index derivatives d^i and the same ordered,
supercommutative convention as polynomial monomials.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, Iterable, List, Tuple

from .scalars import ONE, ExactScalar, as_scalar, render
from .superpoly import (
    Mono,
    Space,
    SuperPolynomial,
    mono_mul,
    mono_parity,
    mono_partial,
)

__all__ = [
    "DifferentialOperator",
    "compose",
    "supercommutator",
    "formal_adjoint",
    "mult",
    "d_raised",
    "d_lower",
    "euler_op",
    "laplacian_op",
    "r2_op",
    "osp_generator",
    "verify_sl2",
]

Key = Tuple[Mono, Mono]


def _factors(alpha: Mono) -> List[int]:
    out = []
    for i, e in enumerate(alpha):
        out.extend([i] * e)
    return out


@lru_cache(maxsize=1 << 18)
def _leibniz(alpha: Mono, b: Mono, m: int) -> Tuple[Tuple[Mono, Mono, int], ...]:
    """Normal-ordered expansion of d^alpha o x^b as (poly, deriv, integer coeff)."""
    zero = (0,) * len(b)
    cur: Dict[Key, int] = {(b, zero): 1}
    for i in reversed(_factors(alpha)):
        odd_i = i >= m
        nxt: Dict[Key, int] = {}
        for (c, d), v in cur.items():
            s, c2 = mono_partial(c, i, m)
            if s:
                k = (c2, d)
                nxt[k] = nxt.get(k, 0) + s * v
            sign = -1 if (odd_i and mono_parity(c, m)) else 1
            s2, d2 = mono_mul((0,) * i + (1,) + (0,) * (len(b) - i - 1), d, m)
            if s2:
                k = (c, d2)
                nxt[k] = nxt.get(k, 0) + sign * s2 * v
        cur = {k: v for k, v in nxt.items() if v}
    return tuple((c, d, v) for (c, d), v in cur.items())


@lru_cache(maxsize=1 << 18)
def _apply_mono(alpha: Mono, b: Mono, m: int) -> Tuple[int, Mono]:
    """d^alpha applied to the monomial x^b: (integer coeff, monomial)."""
    coeff = 1
    for i in reversed(_factors(alpha)):
        s, b = mono_partial(b, i, m)
        if not s:
            return 0, b
        coeff *= s
    return coeff, b


class DifferentialOperator:
    """Normal-ordered differential operator on a :class:`Space`."""

    __slots__ = ("space", "flat")

    def __init__(self, space: Space, flat: Dict[Key, ExactScalar] | None = None):
        self.space = space
        self.flat = {} if flat is None else {k: v for k, v in flat.items() if v}

    @classmethod
    def _raw(cls, space, flat):
        obj = object.__new__(cls)
        obj.space = space
        obj.flat = flat
        return obj

    # constructors
    @classmethod
    def zero(cls, space: Space) -> "DifferentialOperator":
        return cls._raw(space, {})

    @classmethod
    def scalar(cls, space: Space, c) -> "DifferentialOperator":
        c = as_scalar(c)
        z = space.zero_mono()
        return cls._raw(space, {(z, z): c} if c else {})

    identity = classmethod(lambda cls, space: cls.scalar(space, 1))

    # views
    @property
    def terms(self) -> Dict[Mono, SuperPolynomial]:
        """Derivative monomial -> coefficient polynomial."""
        out: Dict[Mono, dict] = {}
        for (a, al), c in self.flat.items():
            out.setdefault(al, {})[a] = c
        return {al: SuperPolynomial._raw(self.space, t) for al, t in out.items()}

    def is_zero(self) -> bool:
        return not self.flat

    def __bool__(self):
        return bool(self.flat)

    def parity_parts(self) -> Dict[int, "DifferentialOperator"]:
        m = self.space.m
        parts: Dict[int, dict] = {}
        for (a, al), c in self.flat.items():
            parts.setdefault((mono_parity(a, m) + mono_parity(al, m)) & 1, {})[(a, al)] = c
        return {p: DifferentialOperator._raw(self.space, t) for p, t in parts.items()}

    def parity(self) -> int:
        ps = self.parity_parts()
        if len(ps) > 1:
            raise ValueError("operator is not homogeneous in parity")
        return next(iter(ps)) if ps else 0

    def order(self) -> int:
        return max((sum(al) for (_, al) in self.flat), default=-1)

    # linear structure
    def __add__(self, other):
        if not isinstance(other, DifferentialOperator):
            other = DifferentialOperator.scalar(self.space, other)
        if other.space is not self.space:
            raise ValueError("operators live on different spaces")
        t = dict(self.flat)
        for k, v in other.flat.items():
            if k in t:
                s = t[k] + v
                if s:
                    t[k] = s
                else:
                    del t[k]
            else:
                t[k] = v
        return DifferentialOperator._raw(self.space, t)

    __radd__ = __add__

    def __neg__(self):
        return DifferentialOperator._raw(self.space, {k: -v for k, v in self.flat.items()})

    def __sub__(self, other):
        if not isinstance(other, DifferentialOperator):
            other = DifferentialOperator.scalar(self.space, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "DifferentialOperator":
        c = as_scalar(c)
        if not c:
            return DifferentialOperator.zero(self.space)
        return DifferentialOperator._raw(self.space, {k: v * c for k, v in self.flat.items()})

    def __mul__(self, other):
        if isinstance(other, DifferentialOperator):
            return compose(self, other)
        if isinstance(other, SuperPolynomial):
            return compose(self, mult(other))
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, SuperPolynomial):
            return compose(mult(other), self)
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, DifferentialOperator):
            return self.space is other.space and self.flat == other.flat
        if isinstance(other, (int, ExactScalar)):
            return self == DifferentialOperator.scalar(self.space, other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.flat.items()))

    # action
    def apply(self, f: SuperPolynomial) -> SuperPolynomial:
        if f.space is not self.space:
            raise ValueError("operator and polynomial live on different spaces")
        m = self.space.m
        out: dict = {}
        for (a, al), c in self.flat.items():
            for b, cb in f.terms.items():
                s, b2 = _apply_mono(al, b, m)
                if not s:
                    continue
                s2, r = mono_mul(a, b2, m)
                if not s2:
                    continue
                v = c * cb * (s * s2)
                out[r] = out[r] + v if r in out else v
        return SuperPolynomial._raw(self.space, {k: v for k, v in out.items() if v})

    __call__ = apply

    def conj(self) -> "DifferentialOperator":
        return DifferentialOperator._raw(self.space, {k: v.conj() for k, v in self.flat.items()})

    # rendering
    def __str__(self):
        if not self.flat:
            return "0"
        parts = []
        names = self.space.names
        for al, poly in sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0]))):
            d = "·".join(f"∂^{names[i]}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(al) if e)
            parts.append(f"({poly})" + (f" · {d}" if d else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"DifferentialOperator({self})"


def compose(A: DifferentialOperator, B: DifferentialOperator) -> DifferentialOperator:
    """Normal-ordered product A o B."""
    if A.space is not B.space:
        raise ValueError("operators live on different spaces")
    m = A.space.m
    out: dict = {}
    for (a, al), ca in A.flat.items():
        for (b, be), cb in B.flat.items():
            cab = ca * cb
            for c, d, v in _leibniz(al, b, m):
                s1, pc = mono_mul(a, c, m)
                if not s1:
                    continue
                s2, pd = mono_mul(d, be, m)
                if not s2:
                    continue
                k = (pc, pd)
                w = cab * (v * s1 * s2)
                out[k] = out[k] + w if k in out else w
    return DifferentialOperator._raw(A.space, {k: v for k, v in out.items() if v})


def supercommutator(A: DifferentialOperator, B: DifferentialOperator) -> DifferentialOperator:
    """[A, B] = AB - (-1)^{|A||B|} BA, extended bilinearly over parity parts."""
    out = DifferentialOperator.zero(A.space)
    pb = B.parity_parts()
    for p, Ap in A.parity_parts().items():
        for q, Bq in pb.items():
            ab = compose(Ap, Bq)
            ba = compose(Bq, Ap)
            out = out + (ab + ba if p and q else ab - ba)
    return out


def formal_adjoint(A: DifferentialOperator) -> DifferentialOperator:
    """Graded formal adjoint: conjugate-linear, x* = x, d* = -d, (AB)* = (-1)^{|A||B|} B*A*."""
    space = A.space
    m = space.m
    z = space.zero_mono()
    out = DifferentialOperator.zero(space)
    for (a, al), c in A.flat.items():
        sign = -1 if (mono_parity(a, m) * mono_parity(al, m)) else 1
        if sum(al) & 1:
            sign = -sign
        d = DifferentialOperator._raw(space, {(z, al): c.conj() * sign})
        out = out + compose(d, DifferentialOperator._raw(space, {(a, z): ONE}))
    return out


# ----------------------------------------------------------- basic operators

def mult(f: SuperPolynomial) -> DifferentialOperator:
    """Left multiplication by f."""
    z = f.space.zero_mono()
    return DifferentialOperator._raw(f.space, {(a, z): c for a, c in f.terms.items()})


def d_raised(space: Space, i: int) -> DifferentialOperator:
    """d^i, the derivative with d^i(x_j) = delta_ij."""
    return DifferentialOperator._raw(space, {(space.zero_mono(), space.unit(i)): ONE})


def d_lower(space: Space, j: int) -> DifferentialOperator:
    """d_j = sum_i d^i beta_{ji}."""
    out = DifferentialOperator.zero(space)
    for i, b in space.d_low[j]:
        out = out + d_raised(space, i).scale(b)
    return out


def x_raised(space: Space, j: int) -> SuperPolynomial:
    """x^j = sum_i x_i beta^{ij}."""
    out = SuperPolynomial.zero(space)
    for i, b in space.x_up[j]:
        out = out + SuperPolynomial.variable(space, i).scale(b)
    return out


def euler_op(space: Space) -> DifferentialOperator:
    return DifferentialOperator._raw(space, {(space.unit(i), space.unit(i)): ONE for i in range(space.nvars)})


def laplacian_op(space: Space) -> DifferentialOperator:
    out = DifferentialOperator.zero(space)
    for (i, j), b in space.beta_up.items():
        out = out + compose(d_lower(space, i), d_lower(space, j)).scale(b)
    return out


def r2_op(space: Space) -> DifferentialOperator:
    from .superpoly import r_squared
    return mult(r_squared(space))


def osp_generator(space: Space, i: int, j: int) -> DifferentialOperator:
    """L_ij = x_i d_j - (-1)^{|i||j|} x_j d_i."""
    xi = mult(SuperPolynomial.variable(space, i))
    xj = mult(SuperPolynomial.variable(space, j))
    sign = -1 if (space.parity(i) and space.parity(j)) else 1
    return compose(xi, d_lower(space, j)) - compose(xj, d_lower(space, i)).scale(sign)


def operator_sum(items: Iterable[DifferentialOperator], space: Space) -> DifferentialOperator:
    t: dict = {}
    for A in items:
        for k, v in A.flat.items():
            t[k] = t[k] + v if k in t else v
    return DifferentialOperator._raw(space, {k: v for k, v in t.items() if v})


def verify_sl2(space: Space) -> List[dict]:
    """[Delta, R^2] = 4E + 2M, [Delta, E] = 2 Delta, [R^2, E] = -2 R^2, all commuting with L_ij."""
    D, R, E = laplacian_op(space), r2_op(space), euler_op(space)
    M = space.superdim
    ref = "sl(2) relations"
    rows = []

    def row(name, idx, lhs, rhs):
        rows.append({"name": name, "indices": idx, "status": "PASS" if lhs == rhs else "FAIL",
                     "lhs": render(lhs), "rhs": render(rhs), "reference": ref})

    row("delta-r2", {}, supercommutator(D, R), E.scale(4) + DifferentialOperator.scalar(space, 2 * M))
    row("delta-euler", {}, supercommutator(D, E), D.scale(2))
    row("r2-euler", {}, supercommutator(R, E), R.scale(-2))
    for i in range(space.nvars):
        for j in range(i, space.nvars):
            if i == j and space.parity(i) == 0:
                continue
            L = osp_generator(space, i, j)
            for name, A in (("delta", D), ("r2", R), ("euler", E)):
                row(f"osp-invariance-{name}", {"i": i, "j": j}, supercommutator(L, A), DifferentialOperator.zero(space))
    return rows
