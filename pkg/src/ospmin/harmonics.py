"""Spherical harmonics on a block of variables.

A :class:`Block` is a subset of the variables of a :class:`Space` that is
closed under the metric (for the model space: the x/theta block R^{p-1|2n} or
the y block R^{q-1}).  Harmonics are polynomials in the block variables killed
by the block Laplacian.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .operators import osp_generator
from .scalars import ExactScalar, nullspace, rank
from .superpoly import (
    ModelParams,
    Space,
    SuperPolynomial,
    binom,
    monomials_of_degree,
    poly_sum,
)

__all__ = [
    "Block",
    "HarmonicBasis",
    "harmonic_basis",
    "dim_formula",
    "fischer_check",
    "raise_harmonic",
    "lower_harmonic",
    "model_blocks",
    "osp_preserves_harmonics",
]


class Block:
    """Variables ``indices`` of ``space``; the metric must not couple them to the rest."""

    def __init__(self, space: Space, indices: Sequence[int], name: str = ""):
        self.space = space
        self.indices = tuple(sorted(indices))
        idx = set(self.indices)
        for (i, j) in space.beta_up:
            if (i in idx) != (j in idx):
                raise ValueError("block is not closed under the metric")
        self.m = sum(1 for i in self.indices if space.parity(i) == 0)
        self.n_odd = len(self.indices) - self.m
        self.name = name or f"R^{{{self.m}|{self.n_odd}}}"

    @classmethod
    def full(cls, space: Space) -> "Block":
        return cls(space, range(space.nvars))

    @classmethod
    def euclidean(cls, m: int, two_n: int = 0) -> "Block":
        if two_n % 2:
            raise ValueError("odd dimension must be even")
        return cls.full(Space([1] * m, two_n // 2))

    @property
    def superdim(self) -> int:
        return self.m - self.n_odd

    def monomials(self, k: int) -> List[Tuple[int, ...]]:
        """Degree-k monomials supported on the block, graded-lex order."""
        sp = self.space
        sub = Space([sp.even_signs[i] for i in self.indices if i < sp.m], self.n_odd // 2)
        out = []
        for mono in monomials_of_degree(sub, k):
            full = [0] * sp.nvars
            for pos, i in enumerate(self.indices):
                full[i] = mono[pos]
            out.append(tuple(full))
        return out

    def laplacian(self, f: SuperPolynomial) -> SuperPolynomial:
        sp = self.space
        idx = set(self.indices)
        parts = []
        for (i, j), b in sp.beta_up.items():
            if i in idx:
                parts.append(f.partial_lower(j).partial_lower(i).scale(b))
        return poly_sum(parts, sp)

    def r_squared(self) -> SuperPolynomial:
        """sum beta^{ij} x_i x_j over the block."""
        sp = self.space
        idx = set(self.indices)
        parts = []
        for (i, j), b in sp.beta_up.items():
            if i in idx:
                parts.append((SuperPolynomial.variable(sp, i) * SuperPolynomial.variable(sp, j)).scale(b))
        return poly_sum(parts, sp)

    def norm_squared(self) -> SuperPolynomial:
        """Positive square norm: s^2 + theta^2 on an x/theta block, t^2 on a y block."""
        sp = self.space
        signs = {sp.even_signs[i] for i in self.indices if i < sp.m}
        if signs == {-1}:
            return -self.r_squared()
        return self.r_squared()

    def sign(self) -> int:
        """+1 for a positive even block, -1 for a negative one."""
        sp = self.space
        signs = {sp.even_signs[i] for i in self.indices if i < sp.m}
        if len(signs) > 1:
            raise ValueError("block has mixed signature")
        return signs.pop() if signs else 1

    def __repr__(self):
        return f"Block({self.name}, vars={[self.space.names[i] for i in self.indices]})"


def model_blocks(params: ModelParams) -> Tuple[Block, Block]:
    """(mu block, nu block): R^{mu+2} and R^{nu+2} inside the model space."""
    sp = params.space
    xt = Block(sp, params.x_indices + params.theta_indices, f"R^{{{params.p - 1}|{2 * params.n}}}")
    yb = Block(sp, params.y_indices, f"R^{{{params.q - 1}}}")
    return (xt, yb) if params.split else (yb, xt)


class HarmonicBasis:
    """Exact basis of H_k on a block."""

    def __init__(self, block: Block, k: int, vectors: List[SuperPolynomial]):
        self.block = block
        self.k = k
        self.vectors = vectors

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, i):
        return self.vectors[i]


_BASIS_CACHE: Dict[Tuple[int, Tuple[int, ...], int], HarmonicBasis] = {}


def harmonic_basis(block: Block, k: int) -> HarmonicBasis:
    """Kernel of the block Laplacian on degree-k polynomials, in reduced echelon form."""
    if k < 0:
        return HarmonicBasis(block, k, [])
    key = (id(block.space), block.indices, k)
    if key in _BASIS_CACHE:
        return _BASIS_CACHE[key]
    sp = block.space
    src = block.monomials(k)
    if k < 2:
        vecs = [SuperPolynomial.monomial(sp, a) for a in src]
        res = HarmonicBasis(block, k, vecs)
        _BASIS_CACHE[key] = res
        return res
    tgt = block.monomials(k - 2)
    tindex = {a: i for i, a in enumerate(tgt)}
    cols = []
    for a in src:
        img = block.laplacian(SuperPolynomial.monomial(sp, a))
        col = [Fraction(0)] * len(tgt)
        for b, c in img.terms.items():
            col[tindex[b]] = c.to_rational()
        cols.append(col)
    rows = [[cols[j][i] for j in range(len(src))] for i in range(len(tgt))]
    # free columns are taken right to left so leading monomials come first
    rev = [list(reversed(r)) for r in rows]
    ns = nullspace(rev, len(src))
    vecs = []
    for v in ns:
        v = list(reversed(v))
        vecs.append(SuperPolynomial(sp, {src[i]: ExactScalar(x) for i, x in enumerate(v) if x}))
    vecs.sort(key=lambda f: _lead_key(f))
    res = HarmonicBasis(block, k, vecs)
    _BASIS_CACHE[key] = res
    return res


def _lead_key(f: SuperPolynomial):
    lead = f.sorted_terms()[-1][0] if f.terms else ()
    return tuple(-e for e in lead)


def dim_formula(m: int, two_n: int, k: int) -> int:
    """dim H_k(R^{m|2n}) for m >= 1."""
    if m < 1:
        raise ValueError("the dimension formula needs m >= 1")
    if k < 0:
        return 0
    first = sum(binom(two_n, i) * binom(k - i + m - 1, m - 1) for i in range(min(k, two_n) + 1))
    second = sum(binom(two_n, i) * binom(k - i + m - 3, m - 1) for i in range(min(k - 2, two_n) + 1))
    return first - second


def dim_polynomials(m: int, two_n: int, k: int) -> int:
    """dim P_k(R^{m|2n})."""
    if k < 0:
        return 0
    return sum(binom(two_n, i) * binom(k - i + m - 1, m - 1) for i in range(min(k, two_n) + 1))


def fischer_check(block: Block, k: int) -> dict:
    """Check P_k = sum_j R^{2j} H_{k-2j} by dimension count and exact rank."""
    M = block.superdim
    report = {"k": k, "block": block.name}
    if M <= 0 and M % 2 == 0:
        report.update(status="SKIPPED", reason="superdimension lies in -2N")
        return report
    r2 = block.r_squared()
    dim_pk = dim_polynomials(block.m, block.n_odd, k)
    dims = [len(harmonic_basis(block, k - 2 * j)) for j in range(k // 2 + 1)]
    mons = block.monomials(k)
    index = {a: i for i, a in enumerate(mons)}
    rows = []
    for j in range(k // 2 + 1):
        r2j = r2 ** j
        for h in harmonic_basis(block, k - 2 * j):
            f = r2j * h
            row = [Fraction(0)] * len(mons)
            for a, c in f.terms.items():
                row[index[a]] = c.to_rational()
            rows.append(row)
    rk = rank(rows, len(mons)) if rows else 0
    ok = (sum(dims) == dim_pk) and rk == dim_pk
    report.update(status="PASS" if ok else "FAIL", dim_pk=dim_pk, harmonic_dims=dims, rank=rk)
    return report


def _denominator(block: Block, k: int) -> int:
    return block.superdim - 2 + 2 * k


def raise_harmonic(phi: SuperPolynomial, k: int, i: int, block: Block) -> SuperPolynomial:
    """phi^+_{k+1,i} = sign z_i phi - |z|^2/(M_b - 2 + 2k) d_{z^i} phi.

    ``sign`` is +1 on a positive block and -1 on a negative (y) block, |z|^2
    is s^2 + theta^2 resp. t^2, and d_{z^i} is the lowered-index derivative.
    """
    den = _denominator(block, k)
    if den == 0:
        raise ValueError(f"raising map undefined: denominator vanishes at k={k}")
    sp = block.space
    if i not in block.indices:
        raise ValueError("index outside the block")
    zi = SuperPolynomial.variable(sp, i)
    return (zi * phi).scale(block.sign()) - block.norm_squared() * phi.partial_lower(i).scale(Fraction(1, den))


def lower_harmonic(phi: SuperPolynomial, k: int, i: int, block: Block) -> SuperPolynomial:
    """phi^-_{k-1,i} = d_{z^i} phi / (M_b - 2 + 2k)."""
    den = _denominator(block, k)
    if den == 0:
        raise ValueError(f"lowering map undefined: denominator vanishes at k={k}")
    if i not in block.indices:
        raise ValueError("index outside the block")
    return phi.partial_lower(i).scale(Fraction(1, den))


def osp_preserves_harmonics(block: Block, k: int) -> bool:
    """Every block generator L_ij maps H_k into H_k."""
    sp = block.space
    basis = harmonic_basis(block, k)
    for a in block.indices:
        for b in block.indices:
            if b < a:
                continue
            L = osp_generator(sp, a, b)
            for h in basis:
                img = L.apply(h)
                if block.laplacian(img) or (img and not img.is_homogeneous()):
                    return False
                if any(any(e for pos, e in enumerate(mono) if pos not in block.indices) for mono in img.terms):
                    return False
    return True
