"""Spin factor Jordan superalgebra, its TKK algebra, and the representations pi_lambda.

Basis of J: e_0 = e (the unit), then e_1 .. e_{m-1} even, then 2n odd vectors.
The form on J has <e_0, e_0> = -1 and agrees with the model-space metric on
the rest.  Coordinates x_k on J* are identified with the model-space
variables: x_0 is y_{q-1}, x_1..x_{p-1} are the x's, x_p..x_{m-1} are
y_1..y_{q-2}, and odd indices are the thetas in order.

istr(J) elements are stored as matrices acting on J (X e_k = sum_l e_l X_lk).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from .operators import (
    DifferentialOperator,
    compose,
    d_lower,
    euler_op,
    laplacian_op,
    mult,
    operator_sum,
    osp_generator,
    r2_op,
    supercommutator,
)
from .scalars import I, ExactScalar, as_scalar, render, rank, row_reduce
from .superpoly import ModelParams, Space, SuperPolynomial, reduce_mod_r2

__all__ = [
    "SpinFactor",
    "JordanElement",
    "TKKAlgebra",
    "TKKElement",
    "jordan_mul",
    "tkk_bracket",
    "pi_lambda",
    "bessel_operator",
    "tkk_to_osp_iso",
    "iso_space",
    "pi_c",
    "tangential_residue",
    "tkk_algebra",
    "verify_jordan_identity",
    "verify_jacobi",
    "verify_isomorphism",
    "verify_homomorphism",
    "verify_tangential",
    "verify_pi_c_well_defined",
]

Mat = Dict[Tuple[int, int], Fraction]


# ------------------------------------------------------------------ matrices

def mat_mul(A: Mat, B: Mat) -> Mat:
    out: Mat = {}
    rows_b: Dict[int, List[Tuple[int, Fraction]]] = {}
    for (k, j), v in B.items():
        rows_b.setdefault(k, []).append((j, v))
    for (i, k), a in A.items():
        for j, b in rows_b.get(k, ()):
            out[(i, j)] = out.get((i, j), 0) + a * b
    return {k: v for k, v in out.items() if v}


def mat_add(A: Mat, B: Mat, c=1) -> Mat:
    out = dict(A)
    for k, v in B.items():
        out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


def mat_scale(A: Mat, c) -> Mat:
    return {k: v * c for k, v in A.items() if v * c}


def mat_apply(A: Mat, v: Dict[int, Fraction]) -> Dict[int, Fraction]:
    out: Dict[int, Fraction] = {}
    for (i, k), a in A.items():
        if k in v:
            out[i] = out.get(i, 0) + a * v[k]
    return {k: x for k, x in out.items() if x}


# ------------------------------------------------------------------ spin factor

class SpinFactor:
    """The spin factor J = R e + V for given (p, q, n)."""

    def __init__(self, params: ModelParams):
        self.params = params
        self.m = params.m
        self.N = params.m + 2 * params.n
        sp = params.space
        self.var = [self._var(k) for k in range(self.N)]
        self.parity = [0 if k < self.m else 1 for k in range(self.N)]
        self.beta: Dict[Tuple[int, int], int] = {}
        for a in range(self.N):
            for b in range(self.N):
                v = sp.beta_low.get((self.var[a], self.var[b]), 0)
                if v:
                    self.beta[(a, b)] = v
        self._L = [self._left_mult(a) for a in range(self.N)]

    def _var(self, k: int) -> int:
        if k == 0:
            return self.m - 1
        if k < self.m:
            return k - 1
        return k

    def basis_product(self, a: int, b: int) -> Dict[int, Fraction]:
        if a == 0:
            return {b: Fraction(1)}
        if b == 0:
            return {a: Fraction(1)}
        v = self.beta.get((a, b), 0)
        return {0: Fraction(v)} if v else {}

    def _left_mult(self, a: int) -> Mat:
        out: Mat = {}
        for k in range(self.N):
            for l, v in self.basis_product(a, k).items():
                out[(l, k)] = v
        return out

    def L(self, a: int) -> Mat:
        return self._L[a]

    def L_vec(self, v: Dict[int, Fraction]) -> Mat:
        out: Mat = {}
        for a, c in v.items():
            out = mat_add(out, self._L[a], c)
        return out

    def mul(self, u: Dict[int, Fraction], v: Dict[int, Fraction]) -> Dict[int, Fraction]:
        out: Dict[int, Fraction] = {}
        for a, ca in u.items():
            for b, cb in v.items():
                for l, x in self.basis_product(a, b).items():
                    out[l] = out.get(l, 0) + ca * cb * x
        return {k: x for k, x in out.items() if x}

    def mat_parity(self, A: Mat) -> int:
        ps = {(self.parity[i] + self.parity[k]) & 1 for (i, k) in A}
        if len(ps) > 1:
            raise ValueError("matrix is not homogeneous")
        return ps.pop() if ps else 0

    def supercomm(self, A: Mat, B: Mat) -> Mat:
        sign = -1 if (self.mat_parity(A) and self.mat_parity(B)) else 1
        return mat_add(mat_mul(A, B), mat_mul(B, A), -sign)

    def form(self, u: Dict[int, Fraction], v: Dict[int, Fraction]) -> Fraction:
        return sum((cu * cv * self.beta.get((a, b), 0) for a, cu in u.items() for b, cv in v.items()),
                   Fraction(0))

    def element(self, coeffs) -> "JordanElement":
        return JordanElement(self, coeffs)


class JordanElement:
    """Element of J as a sparse coordinate map over the basis e_0 .. e_{N-1}."""

    __slots__ = ("J", "c")

    def __init__(self, J: SpinFactor, coeffs):
        self.J = J
        if not isinstance(coeffs, dict):
            coeffs = dict(enumerate(coeffs))
        self.c = {k: Fraction(v) for k, v in coeffs.items() if v}

    @classmethod
    def basis(cls, J: SpinFactor, k: int) -> "JordanElement":
        return cls(J, {k: 1})

    def __mul__(self, other: "JordanElement") -> "JordanElement":
        return jordan_mul(self, other)

    def __add__(self, other):
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, 0) + v
        return JordanElement(self.J, out)

    def __sub__(self, other):
        return self + JordanElement(self.J, {k: -v for k, v in other.c.items()})

    def __eq__(self, other):
        return isinstance(other, JordanElement) and self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def parity(self) -> int:
        ps = {self.J.parity[k] for k in self.c}
        if len(ps) > 1:
            raise ValueError("element is not homogeneous")
        return ps.pop() if ps else 0

    def __repr__(self):
        return "JordanElement(" + " + ".join(f"{v}·e{k}" for k, v in sorted(self.c.items())) + ")"


def jordan_mul(a: JordanElement, b: JordanElement) -> JordanElement:
    """(l e + u)(m e + v) = (l m + <u, v>) e + l v + m u."""
    if a.J is not b.J:
        raise ValueError("elements of different Jordan algebras")
    return JordanElement(a.J, a.J.mul(a.c, b.c))


# ------------------------------------------------------------------ TKK algebra

class TKKAlgebra:
    """TKK(J) = J+ + istr(J) + J- with structure constants computed from J.

    Basis order: Eplus(0..N-1) (the bar-basis, Eplus(0) = -e_0 in J+), then the
    pruned istr basis, then Eminus(0..N-1).
    """

    def __init__(self, params: ModelParams):
        self.params = params
        J = self.J = SpinFactor(params)
        N = J.N
        # spanning set of istr: L_{e_i} (i > 0), [L_{e_i}, L_{e_j}], then L_e
        cand: List[Tuple[str, tuple, Mat]] = []
        for i in range(1, N):
            cand.append(("Le", (i,), J.L(i)))
        for i in range(1, N):
            for j in range(i, N):
                if i == j and not J.parity[i]:
                    continue
                cand.append(("Lij", (i, j), J.supercomm(J.L(i), J.L(j))))
        cand.append(("Le", (), J.L(0)))
        self._positions = [(a, b) for a in range(N) for b in range(N)]
        pos_index = {p: k for k, p in enumerate(self._positions)}
        kept: List[Tuple[str, tuple, Mat]] = []
        rows: List[List[Fraction]] = []
        for name, idx, M in cand:
            if not M:
                continue
            row = [Fraction(0)] * len(self._positions)
            for p, v in M.items():
                row[pos_index[p]] = v
            if rank(rows + [row], len(self._positions)) > len(rows):
                rows.append(row)
                kept.append((name, idx, M))
        self._pos_index = pos_index
        # solver for istr coordinates: reduce the transposed system once
        self._istr_rows = rows

        self.labels: List[str] = []
        self.kinds: List[str] = []
        self.parity: List[int] = []
        self.triples: List[Tuple[dict, Mat, dict]] = []
        for k in range(N):
            self.labels.append(f"Eplus({k})")
            self.kinds.append("plus")
            self.parity.append(J.parity[k])
            self.triples.append(({k: Fraction(-1 if k == 0 else 1)}, {}, {}))
        self.istr_start = N
        for name, idx, M in kept:
            if name == "Le" and idx:
                self.labels.append(f"Le({idx[0]})")
            elif name == "Le":
                self.labels.append("Le")
            else:
                self.labels.append(f"Lij({idx[0]},{idx[1]})")
            self.kinds.append("istr")
            self.parity.append(J.mat_parity(M))
            self.triples.append(({}, M, {}))
        self.minus_start = len(self.labels)
        for k in range(N):
            self.labels.append(f"Eminus({k})")
            self.kinds.append("minus")
            self.parity.append(J.parity[k])
            self.triples.append(({}, {}, {k: Fraction(1)}))
        self.dim = len(self.labels)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self._istr_mats = [M for _, _, M in kept]
        self._build_istr_solver()
        self._struct: Dict[Tuple[int, int], Dict[int, Fraction]] = {}

    # -- coordinates of an istr matrix in the pruned basis
    def _build_istr_solver(self):
        P = len(self._positions)
        k = len(self._istr_mats)
        # augmented system [B | I] reduced once; pivots give a left inverse
        cols = []
        for M in self._istr_mats:
            col = [Fraction(0)] * P
            for p, v in M.items():
                col[self._pos_index[p]] = v
            cols.append(col)
        rows = [[cols[j][i] for j in range(k)] + [Fraction(int(i == r)) for r in range(P)]
                for i in range(P)]
        red, piv = row_reduce(rows, k)
        assert piv == list(range(k))
        self._left_inverse = [r[k:] for r in red[:k]]

    def istr_coords(self, M: Mat) -> Dict[int, Fraction]:
        vec = {self._pos_index[p]: v for p, v in M.items()}
        out = {}
        for j, row in enumerate(self._left_inverse):
            s = sum((row[i] * v for i, v in vec.items()), Fraction(0))
            if s:
                out[self.istr_start + j] = s
        # exactness: reconstruct
        rec: Mat = {}
        for j, c in out.items():
            rec = mat_add(rec, self._istr_mats[j - self.istr_start], c)
        if rec != {k: v for k, v in M.items() if v}:
            raise ArithmeticError("matrix is not in istr(J)")
        return out

    def sharp(self, M: Mat) -> Mat:
        """Action of istr on J-: L_a -> -L_a, inner derivations fixed."""
        a = mat_apply(M, {0: Fraction(1)})
        return mat_add(M, self.J.L_vec(a), -2)

    def _bracket_triples(self, X, Y, px: int, py: int):
        J = self.J
        x1, A1, u1 = X
        x2, A2, u2 = Y
        sign = -1 if (px and py) else 1
        xo: Dict[int, Fraction] = {}
        uo: Dict[int, Fraction] = {}
        Ao: Mat = {}

        def addv(d, v, c=1):
            for k, x in v.items():
                d[k] = d.get(k, 0) + c * x

        # [x, u] = 2 L_{xu} + 2 [L_x, L_u]
        def xu(x, u):
            return mat_add(mat_scale(J.L_vec(J.mul(x, u)), 2), mat_scale(J.supercomm(J.L_vec(x), J.L_vec(u)), 2))

        if x1 and u2:
            Ao = mat_add(Ao, xu(x1, u2))
        if u1 and x2:
            Ao = mat_add(Ao, xu(x2, u1), -sign)
        if A1 and A2:
            Ao = mat_add(Ao, J.supercomm(A1, A2))
        if A1 and x2:
            addv(xo, mat_apply(A1, x2))
        if x1 and A2:
            addv(xo, mat_apply(A2, x1), -sign)
        if A1 and u2:
            addv(uo, mat_apply(self.sharp(A1), u2))
        if u1 and A2:
            addv(uo, mat_apply(self.sharp(A2), u1), -sign)
        return xo, Ao, uo

    def _to_coords(self, xo, Ao, uo) -> Dict[int, Fraction]:
        out: Dict[int, Fraction] = {}
        for k, v in xo.items():
            if v:
                out[k] = v * (-1 if k == 0 else 1)
        if Ao:
            out.update(self.istr_coords(Ao))
        for k, v in uo.items():
            if v:
                out[self.minus_start + k] = v
        return out

    def basis_bracket(self, i: int, j: int) -> Dict[int, Fraction]:
        key = (i, j)
        if key not in self._struct:
            t = self._bracket_triples(self.triples[i], self.triples[j], self.parity[i], self.parity[j])
            self._struct[key] = self._to_coords(*t)
        return self._struct[key]

    def basis(self, label) -> "TKKElement":
        i = self.index[label] if isinstance(label, str) else label
        return TKKElement(self, {i: Fraction(1)})

    def elements(self) -> List["TKKElement"]:
        return [TKKElement(self, {i: Fraction(1)}) for i in range(self.dim)]

    def structure_constants(self) -> Dict[Tuple[int, int], Dict[int, Fraction]]:
        for i in range(self.dim):
            for j in range(self.dim):
                self.basis_bracket(i, j)
        return dict(self._struct)


@lru_cache(maxsize=None)
def tkk_algebra(params: ModelParams) -> TKKAlgebra:
    return TKKAlgebra(params)


class TKKElement:
    """Coordinates over the TKK basis."""

    __slots__ = ("g", "c")

    def __init__(self, g: TKKAlgebra, coeffs: Dict[int, Fraction]):
        self.g = g
        self.c = {k: Fraction(v) for k, v in coeffs.items() if v}

    def __add__(self, other):
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, 0) + v
        return TKKElement(self.g, out)

    def __neg__(self):
        return TKKElement(self.g, {k: -v for k, v in self.c.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return TKKElement(self.g, {k: v * c for k, v in self.c.items()})

    def __eq__(self, other):
        return isinstance(other, TKKElement) and self.g is other.g and self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def is_zero(self):
        return not self.c

    def parity(self) -> int:
        ps = {self.g.parity[k] for k in self.c}
        if len(ps) > 1:
            raise ValueError("element is not homogeneous")
        return ps.pop() if ps else 0

    def __repr__(self):
        if not self.c:
            return "0"
        return " + ".join(f"{v}·{self.g.labels[k]}" for k, v in sorted(self.c.items()))


def tkk_bracket(X: TKKElement, Y: TKKElement) -> TKKElement:
    g = X.g
    out: Dict[int, Fraction] = {}
    for i, a in X.c.items():
        for j, b in Y.c.items():
            for k, v in g.basis_bracket(i, j).items():
                out[k] = out.get(k, 0) + a * b * v
    return TKKElement(g, out)


# ------------------------------------------------------------ representations

@lru_cache(maxsize=None)
def _pieces(params: ModelParams):
    sp = params.space
    return euler_op(sp), laplacian_op(sp)


@lru_cache(maxsize=None)
def bessel_operator(params: ModelParams, k: int, lam) -> DifferentialOperator:
    """B_lambda(e_k) = (-lambda + 2E) d_k - x_k Delta, k a J-index."""
    lam = Fraction(lam)
    sp = params.space
    J = tkk_algebra(params).J
    v = J.var[k]
    E, D = _pieces(params)
    first = compose(E.scale(2) - DifferentialOperator.scalar(sp, as_scalar(lam)), d_lower(sp, v))
    return first - compose(mult(SuperPolynomial.variable(sp, v)), D)


def _derivation(params: ModelParams, M: Mat) -> DifferentialOperator:
    """Vector field D with D(x_k) = sum_l x_l M_lk."""
    sp = params.space
    J = tkk_algebra(params).J
    terms = []
    for (l, k), v in M.items():
        op = compose(mult(SuperPolynomial.variable(sp, J.var[l])), _d_raised(sp, J.var[k]))
        terms.append(op.scale(as_scalar(v)))
    return operator_sum(terms, sp)


def _d_raised(sp: Space, i: int) -> DifferentialOperator:
    from .operators import d_raised
    return d_raised(sp, i)


@lru_cache(maxsize=None)
def _pi_basis(params: ModelParams, i: int, lam: Fraction) -> DifferentialOperator:
    g = tkk_algebra(params)
    sp = params.space
    kind = g.kinds[i]
    J = g.J
    if kind == "minus":
        k = i - g.minus_start
        return mult(SuperPolynomial.variable(sp, J.var[k])).scale(-I)
    if kind == "plus":
        return bessel_operator(params, i, lam).scale(-I)
    M = g.triples[i][1]
    op = _derivation(params, g.sharp(M))
    if g.labels[i] == "Le":
        op = op + DifferentialOperator.scalar(sp, as_scalar(lam / 2))
    return op


def pi_lambda(X: TKKElement, lam) -> DifferentialOperator:
    """pi_lambda(X) as a normal-ordered differential operator."""
    lam = Fraction(lam)
    params = X.g.params
    return operator_sum((_pi_basis(params, i, lam).scale(as_scalar(c)) for i, c in X.c.items()),
                        params.space)


def pi_c(X: TKKElement, f: SuperPolynomial) -> SuperPolynomial:
    """Quotient representation: pi_{2-M}(X) on a representative, then reduce."""
    params = X.g.params
    op = pi_lambda(X, 2 - params.M)
    return reduce_mod_r2(op.apply(f), params)


def tangential_residue(params: ModelParams, k: int, lam) -> Tuple[DifferentialOperator, ExactScalar]:
    """[B_lambda(e_k), R^2] and the coefficient c with [B, R^2] = c x_k + 4 R^2 d_k."""
    sp = params.space
    B = bessel_operator(params, k, lam)
    R = r2_op(sp)
    C = supercommutator(B, R)
    J = tkk_algebra(params).J
    v = J.var[k]
    rest = C - compose(R, d_lower(sp, v)).scale(4)
    xk = mult(SuperPolynomial.variable(sp, v))
    coeff = rest.flat.get((sp.unit(v), sp.zero_mono()), as_scalar(0))
    if rest != xk.scale(coeff):
        raise ArithmeticError("commutator is not of the form c x_k + 4 R^2 d_k")
    return C, coeff


# ------------------------------------------------------- explicit realisation

def iso_space(params: ModelParams) -> Space:
    """R^{p+q|2n} with form diag(1, evens of J past e_0, -1, -1, symplectic)."""
    J = tkk_algebra(params).J
    evens = [1] + [J.beta[(k, k)] for k in range(1, J.m)] + [-1, -1]
    names = [f"z{i}" for i in range(len(evens))] + [f"ϑ{i + 1}" for i in range(2 * params.n)]
    return Space(evens, params.n, names)


def _tilde(params: ModelParams, i: int) -> int:
    return i if i < params.m else i + 2


def tkk_to_osp_iso(X: TKKElement) -> DifferentialOperator:
    """Image of X under the explicit isomorphism onto the L_ij realisation."""
    g = X.g
    params = g.params
    sp = iso_space(params)
    P = params.p + params.q - 1
    e0 = params.m  # slot of the unit e_0

    def L(a, b):
        return osp_generator(sp, a, b)

    out = []
    for i, c in X.c.items():
        lab = g.labels[i]
        kind = g.kinds[i]
        if kind in ("plus", "minus"):
            k = i if kind == "plus" else i - g.minus_start
            if kind == "plus":
                # basis vector is e_k for k > 0 and -e_0 for k = 0
                img = L(_tilde(params, k), P) - L(_tilde(params, k), 0) if k else \
                    L(e0, P) - L(e0, 0)
            else:
                img = L(_tilde(params, k), P) + L(_tilde(params, k), 0) if k else \
                    L(e0, P) + L(e0, 0)
        elif lab == "Le":
            img = L(0, P)
        elif lab.startswith("Le("):
            a = int(lab[3:-1])
            img = L(_tilde(params, a), e0)
        else:
            a, b = map(int, lab[4:-1].split(","))
            img = L(_tilde(params, a), _tilde(params, b))
        out.append(img.scale(as_scalar(c)))
    return operator_sum(out, sp)


# ------------------------------------------------------------ verification

def _report(name, indices, ok, lhs="", rhs="", reference="", status=None) -> dict:
    return {
        "name": name,
        "indices": dict(indices),
        "status": status or ("PASS" if ok else "FAIL"),
        "lhs": render(lhs),
        "rhs": render(rhs),
        "reference": reference,
    }


def verify_jordan_identity(params: ModelParams) -> List[dict]:
    """Graded Jordan identity on basis triples, in the operator form

    sum over cyclic (a, b, c) of (-1)^{|a||c|} [L_{ab}, L_c] = 0.
    """
    J = tkk_algebra(params).J
    N = J.N
    rows = []
    bad = 0
    for a in range(N):
        for b in range(N):
            for c in range(N):
                pa, pb, pc = J.parity[a], J.parity[b], J.parity[c]
                tot: Mat = {}
                for (x, y, z, px, pz) in ((a, b, c, pa, pc), (b, c, a, pb, pa), (c, a, b, pc, pb)):
                    s = -1 if (px and pz) else 1
                    xy = J.mul({x: Fraction(1)}, {y: Fraction(1)})
                    tot = mat_add(tot, J.supercomm(J.L_vec(xy), J.L(z)), s)
                if tot:
                    bad += 1
                    rows.append(_report("jordan-identity", {"a": a, "b": b, "c": c}, False, tot, "0",
                                        "spin factor Jordan superalgebra"))
    rows.append(_report("jordan-identity", {"triples": N ** 3}, bad == 0, f"{bad} failing", "0",
                        "spin factor Jordan superalgebra"))
    return rows


def verify_jacobi(params: ModelParams) -> List[dict]:
    """Super-Jacobi identity of the TKK bracket on all basis triples."""
    g = tkk_algebra(params)
    d = g.dim
    rows = []
    bad = 0
    br = g.basis_bracket

    def bracket_vec(i, v):
        out: Dict[int, Fraction] = {}
        for j, c in v.items():
            for k, w in br(i, j).items():
                out[k] = out.get(k, 0) + c * w
        return out

    for x in range(d):
        for y in range(d):
            for z in range(y, d):
                px, py, pz = g.parity[x], g.parity[y], g.parity[z]
                tot: Dict[int, Fraction] = {}
                for (a, b, c, pa, pc) in ((x, y, z, px, pz), (y, z, x, py, px), (z, x, y, pz, py)):
                    s = -1 if (pa and pc) else 1
                    for k, w in bracket_vec(a, br(b, c)).items():
                        tot[k] = tot.get(k, 0) + s * w
                if any(tot.values()):
                    bad += 1
                    if bad <= 5:
                        rows.append(_report("super-jacobi", {"X": g.labels[x], "Y": g.labels[y], "Z": g.labels[z]},
                                            False, tot, "0", "TKK construction"))
    rows.append(_report("super-jacobi", {"dim": d}, bad == 0, f"{bad} failing", "0", "TKK construction"))
    return rows


def verify_isomorphism(params: ModelParams) -> List[dict]:
    """The explicit isomorphism onto osp(p,q|2n) preserves every basis bracket."""
    g = tkk_algebra(params)
    imgs = [tkk_to_osp_iso(X) for X in g.elements()]
    rows = []
    bad = 0
    for i in range(g.dim):
        for j in range(i, g.dim):
            lhs = tkk_to_osp_iso(TKKElement(g, g.basis_bracket(i, j)))
            rhs = supercommutator(imgs[i], imgs[j])
            if lhs != rhs:
                bad += 1
                if bad <= 5:
                    rows.append(_report("osp-isomorphism", {"X": g.labels[i], "Y": g.labels[j]}, False, lhs, rhs,
                                        "TKK(J) = osp(p,q|2n)"))
    nonzero = all(op for op in imgs)
    rows.append(_report("osp-isomorphism", {"dim": g.dim}, bad == 0 and nonzero,
                        f"{bad} failing, all images nonzero={nonzero}", "0", "TKK(J) = osp(p,q|2n)"))
    return rows


def verify_homomorphism(params: ModelParams, lam) -> List[dict]:
    """[pi(X), pi(Y)] = pi([X, Y]) on all basis pairs."""
    lam = Fraction(lam)
    g = tkk_algebra(params)
    ops = [pi_lambda(X, lam) for X in g.elements()]
    rows = []
    bad = 0
    for i in range(g.dim):
        for j in range(i, g.dim):
            lhs = supercommutator(ops[i], ops[j])
            rhs = pi_lambda(TKKElement(g, g.basis_bracket(i, j)), lam)
            if lhs != rhs:
                bad += 1
                if bad <= 5:
                    rows.append(_report("homomorphism", {"X": g.labels[i], "Y": g.labels[j], "lambda": str(lam)},
                                        False, lhs, rhs, "representation pi_lambda"))
    rows.append(_report("homomorphism", {"lambda": str(lam), "pairs": g.dim * (g.dim + 1) // 2}, bad == 0,
                        f"{bad} failing", "0", "representation pi_lambda"))
    return rows


def verify_tangential(params: ModelParams, lam) -> List[dict]:
    """[B_lambda(e_k), R^2] lies in the ideal of R^2 for all k iff lambda = 2 - M."""
    lam = Fraction(lam)
    J = tkk_algebra(params).J
    critical = lam == 2 - params.M
    rows = []
    for k in range(J.N):
        _, c = tangential_residue(params, k, lam)
        rows.append(_report("tangential", {"k": k, "lambda": str(lam)}, (not c) == critical, c,
                            "0" if critical else "nonzero", "tangential Bessel operators"))
    return rows


def verify_pi_c_well_defined(params: ModelParams, max_degree: int = 2) -> List[dict]:
    """pi_{2-M}(X) maps R^2 P into R^2 P, checked on R^2 times monomials of low degree."""
    from .superpoly import monomials_of_degree, r_squared
    sp = params.space
    g = tkk_algebra(params)
    R2 = r_squared(sp)
    lam = 2 - params.M
    bad = 0
    count = 0
    for X in g.elements():
        op = pi_lambda(X, lam)
        for d in range(max_degree + 1):
            for a in monomials_of_degree(sp, d):
                count += 1
                if reduce_mod_r2(op.apply(R2 * SuperPolynomial.monomial(sp, a)), params):
                    bad += 1
    return [_report("quotient-well-defined", {"max_degree": max_degree, "cases": count}, bad == 0,
                    f"{bad} failing", "0", "tangential Bessel operators")]
