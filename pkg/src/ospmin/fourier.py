"""The Fourier-conjugated representation and the adjoint identities.

The super Fourier transform only enters through its action on operators:
conjugation by it exchanges coordinates and derivatives,

    x_k -> i d_k,    d_k -> i x_k,

extended to an algebra morphism of the Weyl superalgebra.  Everything here
is an exact identity between normal-ordered differential operators.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import List

from .harmonics import Block, harmonic_basis
from .liealg import TKKElement, pi_lambda, tkk_algebra
from .operators import (
    DifferentialOperator,
    _factors,
    compose,
    d_lower,
    euler_op,
    formal_adjoint,
    laplacian_op,
    mult,
    r2_op,
    supercommutator,
)
from .scalars import I, ONE, as_scalar, render
from .superpoly import ModelParams, Space, SuperPolynomial

__all__ = [
    "mu_critical",
    "FourierRepTable",
    "pi_hat",
    "fourier_symbol",
    "verify_symbol_relations",
    "verify_fourier_table",
    "verify_ker_delta",
    "verify_adjoint",
    "verify_pi_hat_homomorphism",
]


def mu_critical(params: ModelParams) -> Fraction:
    """mu^c = -(p+q-4-2n) / (4(p+q-1-2n))."""
    p, q, n = params.p, params.q, params.n
    den = 4 * (p + q - 1 - 2 * n)
    if den == 0:
        raise ZeroDivisionError("p+q-1-2n vanishes")
    return Fraction(-(p + q - 4 - 2 * n), den)


class FourierRepTable:
    """The four operator assignments of the Fourier-conjugated representation at fixed lambda."""

    def __init__(self, params: ModelParams, lam):
        self.params = params
        self.lam = Fraction(lam)
        self.mu_c = mu_critical(params)

    def __call__(self, X: TKKElement) -> DifferentialOperator:
        return pi_hat(X, self.lam)

    def rows(self) -> List[tuple]:
        g = tkk_algebra(self.params)
        return [(g.labels[i], pi_hat(g.basis(g.labels[i]), self.lam)) for i in range(len(g.labels))]


@lru_cache(maxsize=None)
def _pi_hat_basis(params: ModelParams, i: int, lam: Fraction) -> DifferentialOperator:
    g = tkk_algebra(params)
    sp = params.space
    J = g.J
    kind = g.kinds[i]
    if kind == "minus":
        return d_lower(sp, J.var[i - g.minus_start])
    if kind == "plus":
        v = J.var[i]
        E = euler_op(sp)
        first = compose(mult(SuperPolynomial.variable(sp, v)), E.scale(2) - DifferentialOperator.scalar(sp, as_scalar(lam)))
        return compose(r2_op(sp), d_lower(sp, v)) - first
    # istr: the osp(J) part acts by the same derivation, L_e by -lambda/2 + E
    if g.labels[i] == "Le":
        return euler_op(sp) - DifferentialOperator.scalar(sp, as_scalar(lam / 2))
    return pi_lambda(g.basis(g.labels[i]), 0)


def pi_hat(X: TKKElement, lam) -> DifferentialOperator:
    """Fourier-conjugated representation on a TKK element."""
    lam = Fraction(lam)
    params = X.g.params
    out = DifferentialOperator.zero(params.space)
    for i, c in X.c.items():
        out = out + _pi_hat_basis(params, i, lam).scale(as_scalar(c))
    return out


# ------------------------------------------------------------------ symbol map

@lru_cache(maxsize=None)
def _gen_images(sp: Space):
    """Images of x_i and of the raised derivatives d^i."""
    xs = []
    for k in range(sp.nvars):
        xs.append(d_lower(sp, k).scale(I))
    dl = []
    for k in range(sp.nvars):
        dl.append(mult(SuperPolynomial.variable(sp, k)).scale(I))
    # d^i = sum_j beta^{ij} d_j
    ds = []
    for i in range(sp.nvars):
        op = DifferentialOperator.zero(sp)
        for j in range(sp.nvars):
            b = sp.beta_up.get((i, j), 0)
            if b:
                op = op + dl[j].scale(b)
        ds.append(op)
    return xs, ds


def fourier_symbol(A: DifferentialOperator) -> DifferentialOperator:
    """Conjugate A by the super Fourier transform (formal symbol exchange)."""
    sp = A.space
    xs, ds = _gen_images(sp)
    out = DifferentialOperator.zero(sp)
    for (a, al), c in A.flat.items():
        op = DifferentialOperator.scalar(sp, c)
        for i in _factors(a):
            op = compose(op, xs[i])
        for i in _factors(al):
            op = compose(op, ds[i])
        out = out + op
    return out


def _row(name, indices, ok, lhs="", rhs="", status=None) -> dict:
    return {
        "name": name,
        "indices": dict(indices),
        "status": status or ("PASS" if ok else "FAIL"),
        "lhs": render(lhs),
        "rhs": render(rhs),
        "reference": "Fourier-conjugated representation",
    }


def verify_symbol_relations(params: ModelParams) -> List[dict]:
    """The symbol exchange preserves the Weyl superalgebra relations."""
    sp = params.space
    xs, ds = _gen_images(sp)
    rows = []
    for i in range(sp.nvars):
        for j in range(sp.nvars):
            want = DifferentialOperator.scalar(sp, ONE) if i == j else DifferentialOperator.zero(sp)
            got = supercommutator(ds[i], xs[j])
            rows.append(_row("symbol-weyl", {"i": i, "j": j}, got == want, got, want))
            if j >= i:
                a = supercommutator(xs[i], xs[j])
                b = supercommutator(ds[i], ds[j])
                rows.append(_row("symbol-commuting", {"i": i, "j": j}, not a and not b, f"{a} ; {b}", "0 ; 0"))
    return rows


def verify_fourier_table(params: ModelParams, lam) -> List[dict]:
    """pi_hat_lambda(X) equals the symbol conjugate of pi_{-lambda-2M}(X) for every basis X."""
    lam = Fraction(lam)
    g = tkk_algebra(params)
    dual = -lam - 2 * params.M
    rows = []
    for label in g.labels:
        X = g.basis(label)
        lhs = pi_hat(X, lam)
        rhs = fourier_symbol(pi_lambda(X, dual))
        rows.append(_row("fourier-table", {"X": label, "lambda": str(lam)}, lhs == rhs, lhs, rhs))
    return rows


def verify_ker_delta(params: ModelParams, lam, max_degree: int = 3) -> List[dict]:
    """Commutators with the Laplacian, and whether ker Delta is preserved (iff lambda = 2 - M)."""
    lam = Fraction(lam)
    sp = params.space
    g = tkk_algebra(params)
    D = laplacian_op(sp)
    M = params.M
    critical = lam == 2 - M
    rows = []
    block = Block.full(sp)
    harm = [h for k in range(max_degree + 1) for h in harmonic_basis(block, k)]
    for i, label in enumerate(g.labels):
        X = g.basis(label)
        P = pi_hat(X, lam)
        C = supercommutator(D, P)
        kind = g.kinds[i]
        if kind == "plus":
            v = g.J.var[i]
            want = (d_lower(sp, v).scale(2 * (lam - 2 + M))
                    - compose(mult(SuperPolynomial.variable(sp, v)), D).scale(4))
        elif label == "Le":
            want = D.scale(2)
        else:
            want = DifferentialOperator.zero(sp)
        rows.append(_row("laplacian-commutator", {"X": label, "lambda": str(lam)}, C == want, C, want))
        if kind == "plus":
            kept = all(not D.apply(P.apply(h)) for h in harm)
            rows.append(_row("kernel-preserved", {"X": label, "lambda": str(lam), "max_degree": max_degree},
                             kept == critical, kept, critical))
    return rows


def verify_adjoint(params: ModelParams, lam) -> List[dict]:
    """pi_lambda(X)* = -pi_{-lambda-2M}(X), and the same for pi_hat, on every basis X."""
    lam = Fraction(lam)
    g = tkk_algebra(params)
    dual = -lam - 2 * params.M
    rows = []
    for label in g.labels:
        X = g.basis(label)
        a = formal_adjoint(pi_lambda(X, lam))
        b = pi_lambda(X, dual).scale(-1)
        rows.append(_row("adjoint", {"X": label, "lambda": str(lam)}, a == b, a, b))
        a = formal_adjoint(pi_hat(X, lam))
        b = pi_hat(X, dual).scale(-1)
        rows.append(_row("adjoint-hat", {"X": label, "lambda": str(lam)}, a == b, a, b))
    return rows


def verify_pi_hat_homomorphism(params: ModelParams, lam) -> List[dict]:
    """[pi_hat(X), pi_hat(Y)] = pi_hat([X, Y]) on all basis pairs."""
    lam = Fraction(lam)
    g = tkk_algebra(params)
    ops = [pi_hat(X, lam) for X in g.elements()]
    bad = 0
    rows = []
    for i in range(g.dim):
        for j in range(i, g.dim):
            lhs = supercommutator(ops[i], ops[j])
            rhs = pi_hat(TKKElement(g, g.basis_bracket(i, j)), lam)
            if lhs != rhs:
                bad += 1
                if bad <= 5:
                    rows.append(_row("pi-hat-homomorphism", {"X": g.labels[i], "Y": g.labels[j], "lambda": str(lam)},
                                     False, lhs, rhs))
    rows.append(_row("pi-hat-homomorphism", {"lambda": str(lam)}, bad == 0, f"{bad} failing", "0"))
    return rows
