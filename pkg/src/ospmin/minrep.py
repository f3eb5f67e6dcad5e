"""The module W generated by Ktilde_{nu/2}(|X|) modulo R^2.

Basis vectors are phi_k psi_l Lambda^{mu+2k, nu+2l}_{2, j-k}(|X|) with phi_k and
psi_l running over the harmonic bases of the mu- and nu-blocks.  Everything is
exact: images are compared in canonical form and re-expanded by an exact
sparse solve whose residual must vanish.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .harmonics import Block, dim_formula, harmonic_basis, lower_harmonic, model_blocks, raise_harmonic
from .liealg import TKKElement, pi_lambda, tkk_algebra
from .operators import DifferentialOperator, compose, d_lower, euler_op, laplacian_op, mult, osp_generator
from .radial import MixedElement, apply_radial, gegenbauer, laguerre
from .scalars import I, ONE, ExactScalar, as_scalar, render, pochhammer
from .superpoly import ModelParams, Space, SuperPolynomial

__all__ = [
    "WBasisElement",
    "WModule",
    "WVector",
    "TruncationError",
    "w_module",
    "w_basis",
    "act",
    "w_hypothesis",
    "bessel_pm",
    "verify_bessel_action",
    "verify_le_action",
    "verify_w_action",
    "w_action_cases",
    "phi_iso",
    "w_dimension",
    "w_dimension_product",
    "gk_dimension",
    "SparseEchelon",
]


class TruncationError(ValueError):
    """An image left the truncated range j <= j_max."""


def w_hypothesis(params: ModelParams) -> Optional[str]:
    """None when W has an explicit finite basis, else the violated hypothesis."""
    nu = params.nu
    if nu <= 0 and nu % 2 == 0:
        return f"nu = {nu} lies in -2N"
    if (params.p + params.q) % 2:
        return "p+q is odd, so W_j is not k-finite"
    return None


# ------------------------------------------------------------------ sparse solve

class SparseEchelon:
    """Incremental reduced echelon form of sparse vectors with exact entries.

    Each stored row remembers which combination of the inserted vectors it is,
    so targets in the span can be expressed in the original vectors.
    """

    def __init__(self):
        self.rows: Dict[object, Tuple[dict, dict]] = {}
        self.count = 0

    @staticmethod
    def _axpy(x: dict, a, y: dict) -> None:
        for k, v in y.items():
            w = a * v
            if k in x:
                s = x[k] + w
                if s:
                    x[k] = s
                else:
                    del x[k]
            elif w:
                x[k] = w

    def reduce(self, vec: dict, combo: dict | None = None) -> Tuple[dict, dict]:
        vec = dict(vec)
        combo = dict(combo or {})
        for key in [k for k in vec if k in self.rows]:
            c = vec.get(key)
            if not c:
                continue
            r, rc = self.rows[key]
            self._axpy(vec, -c, r)
            self._axpy(combo, -c, rc)
        return vec, combo

    def add(self, vec: dict, tag) -> bool:
        """Insert a vector; False if it is dependent on the earlier ones."""
        v, combo = self.reduce(vec, {tag: ONE})
        self.count += 1
        if not v:
            return False
        piv = None
        for k in sorted(v):
            if as_scalar(v[k]).is_monomial():
                piv = k
                break
        if piv is None:
            raise ArithmeticError("no invertible pivot")
        inv = ONE / v[piv]
        v = {k: x * inv for k, x in v.items()}
        combo = {k: x * inv for k, x in combo.items()}
        for key, (r, rc) in self.rows.items():
            c = r.get(piv)
            if c:
                self._axpy(r, -c, v)
                self._axpy(rc, -c, combo)
        self.rows[piv] = (v, combo)
        return True

    def express(self, vec: dict) -> Tuple[dict, dict]:
        """(coefficients on inserted tags, residual)."""
        rest, combo = self.reduce(vec, {})
        return {k: -v for k, v in combo.items() if v}, rest

    def __len__(self):
        return len(self.rows)


# ------------------------------------------------------------------ basis

class WBasisElement:
    """phi_k psi_l Lambda^{mu+2k, nu+2l}_{2, j-k}(|X|)."""

    __slots__ = ("j", "k", "l", "a", "b", "phi", "psi", "radial", "mixed")

    def __init__(self, j, k, l, a, b, phi, psi, radial, mixed):
        self.j, self.k, self.l, self.a, self.b = j, k, l, a, b
        self.phi, self.psi, self.radial, self.mixed = phi, psi, radial, mixed

    @property
    def indices(self) -> Tuple[int, int, int, int, int]:
        return (self.j, self.k, self.l, self.a, self.b)

    def __repr__(self):
        return f"W(j={self.j}, k={self.k}, l={self.l}, φ#{self.a}, ψ#{self.b})"


def _lam_c(params: ModelParams) -> Fraction:
    return Fraction(2 - params.M)


def _product_element(params: ModelParams, phi, psi, mu_shift: int, nu_shift: int, j: int) -> MixedElement:
    """phi psi Lambda^{mu+mu_shift, nu+nu_shift}_{2,j} over the base nu/2."""
    base = Fraction(params.nu, 2)
    rad = laguerre(params.mu + mu_shift, params.nu + nu_shift, j, base=base, strict=False)
    return MixedElement.from_parts(phi * psi, rad, params)


class WModule:
    """Truncated W = sum_{j <= j_max} W_j with exact coordinates."""

    def __init__(self, params: ModelParams, j_max: int):
        why = w_hypothesis(params)
        if why is not None:
            raise ValueError(f"explicit basis of W unavailable: {why}")
        self.params = params
        self.j_max = j_max
        self.mu, self.nu = params.mu, params.nu
        self.base = Fraction(params.nu, 2)
        self.mu_block, self.nu_block = model_blocks(params)
        self.basis: List[WBasisElement] = []
        self.levels: Dict[int, List[int]] = {}
        for j in range(j_max + 1):
            self.levels[j] = []
            for k in range(j + 1):
                for l in range((self.mu - self.nu) // 2 + j + 1):
                    hk = harmonic_basis(self.mu_block, k)
                    hl = harmonic_basis(self.nu_block, l)
                    for a, phi in enumerate(hk):
                        for b, psi in enumerate(hl):
                            mixed = _product_element(params, phi, psi, 2 * k, 2 * l, j - k)
                            rad = laguerre(self.mu + 2 * k, self.nu + 2 * l, j - k, base=self.base, strict=False)
                            self.levels[j].append(len(self.basis))
                            self.basis.append(WBasisElement(j, k, l, a, b, phi, psi, rad, mixed))
        self._echelon: Dict[int, SparseEchelon] = {}

    def dim(self, j: int) -> int:
        return len(self.levels.get(j, []))

    def _solver(self, j_top: int) -> SparseEchelon:
        if j_top not in self._echelon:
            ech = SparseEchelon()
            for j in range(j_top + 1):
                for idx in self.levels[j]:
                    if not ech.add(self.basis[idx].mixed.terms, idx):
                        raise ArithmeticError(f"basis element {self.basis[idx]} is dependent")
            self._echelon[j_top] = ech
        return self._echelon[j_top]

    def check_independent(self, j_top: int | None = None) -> bool:
        self._solver(self.j_max if j_top is None else j_top)
        return True

    def coordinates(self, f: MixedElement, j_top: int | None = None) -> Dict[int, ExactScalar]:
        """Exact coordinates of f; raises when f is outside the truncated span."""
        ech = self._solver(self.j_max if j_top is None else j_top)
        coeffs, rest = ech.express(f.terms)
        if rest:
            raise TruncationError("element is not in the span of the truncated basis")
        return coeffs

    def expand(self, coords: Dict[int, ExactScalar]) -> MixedElement:
        out = MixedElement.zero(self.params, self.base)
        for idx, c in coords.items():
            out = out + self.basis[idx].mixed.scale(c)
        return out

    def vector(self, idx: int) -> "WVector":
        return WVector(self, {idx: ONE})


_MODULES: Dict[Tuple[ModelParams, int], WModule] = {}


def w_module(params: ModelParams, j_max: int) -> WModule:
    key = (params, j_max)
    if key not in _MODULES:
        _MODULES[key] = WModule(params, j_max)
    return _MODULES[key]


def w_basis(params: ModelParams, j_max: int) -> List[WBasisElement]:
    if j_max < 0:
        return []
    return w_module(params, j_max).basis


class WVector:
    """Exact coordinates over a :class:`WModule` basis."""

    def __init__(self, module: WModule, coords: Dict[int, ExactScalar]):
        self.module = module
        self.coords = {k: as_scalar(v) for k, v in coords.items() if v}

    def level(self) -> int:
        return max((self.module.basis[i].j for i in self.coords), default=-1)

    def levels(self) -> set:
        return {self.module.basis[i].j for i in self.coords}

    def mixed(self) -> MixedElement:
        return self.module.expand(self.coords)

    def __add__(self, other):
        t = dict(self.coords)
        for k, v in other.coords.items():
            t[k] = t[k] + v if k in t else v
        return WVector(self.module, t)

    def scale(self, c):
        c = as_scalar(c)
        return WVector(self.module, {k: v * c for k, v in self.coords.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        return isinstance(other, WVector) and self.coords == other.coords

    def __repr__(self):
        return f"WVector({len(self.coords)} terms, levels={sorted(self.levels())})"


def act(X: TKKElement, v: WVector) -> WVector:
    """pi_C(X) v re-expanded in the basis (needs one level of headroom)."""
    mod = v.module
    if v.level() >= mod.j_max:
        raise TruncationError(f"acting on level {v.level()} needs j_max >= {v.level() + 1}")
    op = pi_lambda(X, _lam_c(mod.params))
    img = apply_radial(op, v.mixed())
    top = min(mod.j_max, v.level() + 1)
    return WVector(mod, mod.coordinates(img, top))


# ------------------------------------------------------------------ Bessel action

@lru_cache(maxsize=None)
def _bessel_var(params: ModelParams, v: int, lam: Fraction) -> DifferentialOperator:
    """B_lambda(z_v) = (-lambda + 2E) d_v - z_v Delta on the model space."""
    sp = params.space
    E = euler_op(sp)
    D = laplacian_op(sp)
    first = compose(E.scale(2) - DifferentialOperator.scalar(sp, as_scalar(lam)), d_lower(sp, v))
    return first - compose(mult(SuperPolynomial.variable(sp, v)), D)


@lru_cache(maxsize=None)
def bessel_pm(params: ModelParams, v: int) -> DifferentialOperator:
    """B(z_v) - z_v on the x/theta block, B(y_v) + y_v on the y block, at lambda = 2 - M."""
    sp = params.space
    sign = -1 if v in params.y_indices else 1
    return _bessel_var(params, v, _lam_c(params)) - mult(SuperPolynomial.variable(sp, v)).scale(sign)


def _check(name, indices, ok, lhs="", rhs="", reference="", status=None) -> dict:
    return {
        "name": name,
        "indices": dict(indices),
        "status": status or ("PASS" if ok else "FAIL"),
        "lhs": render(lhs),
        "rhs": render(rhs),
        "reference": reference,
    }


def _skip(name, indices, reference, reason) -> dict:
    row = _check(name, indices, False, reference=reference, status="SKIPPED")
    row["reason"] = reason
    return row


def verify_bessel_action(params: ModelParams, j: int, k: int, l: int, i: int, a: int = 0, b: int = 0) -> dict:
    """Compare the action of B^+_i or B^-_i on phi_k psi_l Lambda with the two-term formula.

    ``i`` is a model-space variable index; its block decides whether the
    raising/lowering happens in k (mu-block) or in l (nu-block).  ``a`` and
    ``b`` select the harmonics inside the bases.
    """
    mu, nu = params.mu, params.nu
    mb, nb = model_blocks(params)
    idx = {"j": j, "k": k, "l": l, "i": i, "a": a, "b": b}
    ref = "Bessel operator action on Laguerre-harmonic products"
    if nu + 2 * l == 0:
        return _skip("bessel-action", idx, ref, "nu + 2l = 0: Ktilde_0 has a logarithmic term")
    hk = harmonic_basis(mb, k)
    hl = harmonic_basis(nb, l)
    if a >= len(hk) or b >= len(hl):
        raise IndexError("harmonic index out of range")
    phi, psi = hk[a], hl[b]
    f = _product_element(params, phi, psi, 2 * k, 2 * l, j - k)
    lhs = apply_radial(bessel_pm(params, i), f)
    zero = MixedElement.zero(params, Fraction(nu, 2))
    if i in mb.indices:
        rhs = zero
        if mb.superdim - 2 + 2 * k != 0:
            up = raise_harmonic(phi, k, i, mb)
            rhs = rhs + _product_element(params, up, psi, 2 * (k + 1), 2 * l, j - k - 1).scale(j + mu + k + 1)
            if k > 0:
                down = lower_harmonic(phi, k, i, mb)
                rhs = rhs + _product_element(params, down, psi, 2 * (k - 1), 2 * l, j - k + 1).scale(4 * (j - k + 1))
        else:
            return _skip("bessel-action+", idx, ref, "raising map undefined: M_mu - 2 + 2k = 0")
        name = "bessel-action+"
    else:
        if nb.superdim - 2 + 2 * l == 0:
            return _skip("bessel-action-", idx, ref, "raising map undefined: M_nu - 2 + 2l = 0")
        up = raise_harmonic(psi, l, i, nb)
        rhs = _product_element(params, phi, up, 2 * k, 2 * (l + 1), j - k).scale(-(j + Fraction(mu - nu, 2) - l))
        if l > 0:
            down = lower_harmonic(psi, l, i, nb)
            rhs = rhs + _product_element(params, phi, down, 2 * k, 2 * (l - 1), j - k).scale(
                -4 * (j + Fraction(mu + nu, 2) + l))
        name = "bessel-action-"
    ok = lhs == rhs
    return _check(name, idx, ok, lhs if not ok else "", rhs if not ok else "", ref)


def verify_le_action(params: ModelParams, j: int, k: int, l: int, a: int = 0, b: int = 0) -> dict:
    """pi_C(-L_e) on phi_k psi_l Lambda against the two-term j +- 1 formula."""
    mu, nu = params.mu, params.nu
    mb, nb = model_blocks(params)
    idx = {"j": j, "k": k, "l": l, "a": a, "b": b}
    ref = "action of L_e on the W_j decomposition"
    phi = harmonic_basis(mb, k)[a]
    psi = harmonic_basis(nb, l)[b]
    f = _product_element(params, phi, psi, 2 * k, 2 * l, j - k)
    g = tkk_algebra(params)
    op = pi_lambda(g.basis("Le"), _lam_c(params)).scale(-1)
    lhs = apply_radial(op, f)
    if j == 0:
        rhs = _product_element(params, phi, psi, 0, 2 * l, 1)
    else:
        den = 2 * j + mu + 1
        up = Fraction((j - k + 1) * (j + k + mu + 1), den)
        down = -(j + l + Fraction(mu + nu, 2)) * (j - l + Fraction(mu - nu, 2)) / den
        rhs = _product_element(params, phi, psi, 2 * k, 2 * l, j + 1 - k).scale(up) \
            + _product_element(params, phi, psi, 2 * k, 2 * l, j - 1 - k).scale(down)
    ok = lhs == rhs
    return _check("le-action", idx, ok, lhs if not ok else "", rhs if not ok else "", ref)


def w_action_cases(params: ModelParams, j_max: int) -> List[tuple]:
    """All (j, k, l, a, b) with j <= j_max, k <= j and l in the W range (capped at j_max if infinite)."""
    mb, nb = model_blocks(params)
    mu, nu = params.mu, params.nu
    out = []
    for j in range(j_max + 1):
        lmax = (mu - nu) // 2 + j if (params.p + params.q) % 2 == 0 else j_max
        for k in range(j + 1):
            for l in range(max(lmax, 0) + 1):
                for a in range(len(harmonic_basis(mb, k))):
                    for b in range(len(harmonic_basis(nb, l))):
                        out.append((j, k, l, a, b))
    return out


def verify_w_action(params: ModelParams, j_max: int = 2, cases: Optional[Sequence[tuple]] = None) -> List[dict]:
    """Bessel actions for every model variable i and the L_e action on every W basis vector up to j_max."""
    rows = []
    for (j, k, l, a, b) in (cases if cases is not None else w_action_cases(params, j_max)):
        for i in range(params.space.nvars):
            rows.append(verify_bessel_action(params, j, k, l, i, a, b))
        rows.append(verify_le_action(params, j, k, l, a, b))
    return rows


# ------------------------------------------------------------------ intertwiner

class PhiTarget:
    """R^{mu+3} x R^{nu+3}: model variables with positive even metric plus s0, t0."""

    def __init__(self, params: ModelParams):
        self.params = params
        msp = params.space
        names = list(msp.names[:msp.m]) + ["s0", "t0"] + list(msp.names[msp.m:])
        mb, nb = model_blocks(params)
        # the extra coordinates carry the signature of their block
        signs = list(msp.even_signs) + [mb.sign(), nb.sign()]
        self.space = Space(signs, params.n, names)
        self.s0 = msp.m
        self.t0 = msp.m + 1
        self.mu_vars = [self.map_index(i) for i in mb.indices]
        self.nu_vars = [self.map_index(i) for i in nb.indices]
        self.mu_block = Block(self.space, self.mu_vars + [self.s0], f"R^{{{params.mu}+3}}")
        self.nu_block = Block(self.space, self.nu_vars + [self.t0], f"R^{{{params.nu}+3}}")
        self.mu_inner = Block(self.space, self.mu_vars)
        self.nu_inner = Block(self.space, self.nu_vars)

    def map_index(self, i: int) -> int:
        m = self.params.space.m
        return i if i < m else i + 2

    def embed(self, f: SuperPolynomial) -> SuperPolynomial:
        m = self.params.space.m
        t = {}
        for a, c in f.terms.items():
            t[tuple(a[:m]) + (0, 0) + tuple(a[m:])] = c
        return SuperPolynomial(self.space, t)

    def var(self, i: int) -> SuperPolynomial:
        return SuperPolynomial.variable(self.space, i)


@lru_cache(maxsize=None)
def phi_target(params: ModelParams) -> PhiTarget:
    return PhiTarget(params)


def _gegenbauer_homog(lam, deg: int, w: SuperPolynomial, norm2: SuperPolynomial) -> SuperPolynomial:
    """S^deg C~^lam_deg(w/S) with S^2 = norm2 + w^2, as a polynomial."""
    g = gegenbauer(lam, deg)
    sp = w.space
    S2 = norm2 + w * w
    out = SuperPolynomial.zero(sp)
    for (e,), c in g.terms.items():
        # c w^e S^{deg-e}; deg - e is even
        out = out + (w ** e) * (S2 ** ((deg - e) // 2)).scale(c)
    return out


def phi_map(params: ModelParams, j: int, k: int, l: int, phi: SuperPolynomial, psi: SuperPolynomial) -> SuperPolynomial:
    """Image of phi_k psi_l Lambda^{mu+2k,nu+2l}_{2,j-k} under the intertwiner."""
    T = phi_target(params)
    mu, nu = params.mu, params.nu
    half = (mu - nu) // 2
    if k > j or l > half + j or j < 0:
        return SuperPolynomial.zero(T.space)
    ck = (-4 * I) ** k / pochhammer(mu + j + 1, k)
    dl = (4 * I) ** l / pochhammer(-j - half, l)
    A = _gegenbauer_homog(Fraction(2 * k + mu + 1, 2), j - k, T.var(T.s0), T.mu_inner.norm_squared())
    B = _gegenbauer_homog(Fraction(2 * l + nu + 1, 2), j - l + half, T.var(T.t0), T.nu_inner.norm_squared())
    return (T.embed(phi) * T.embed(psi) * A * B).scale(ck * dl)


def _phi_of_mixed_combination(params, j, parts) -> SuperPolynomial:
    T = phi_target(params)
    out = SuperPolynomial.zero(T.space)
    for c, k, l, phi, psi in parts:
        out = out + phi_map(params, j, k, l, phi, psi).scale(c)
    return out


def phi_iso(params: ModelParams, j: int, samples: Optional[Sequence[int]] = None, min_samples: int = 5) -> dict:
    """Build the intertwiner on W_j and check harmonicity, injectivity and intertwining.

    Intertwining is checked by expanding pi_C(B^pm_i) f in the W_j basis and
    comparing 2 L_{i,0}(Phi f) with Phi of the result, where L_{i,0} rotates
    z_i into the extra coordinate of its block.
    """
    why = w_hypothesis(params)
    ref = "intertwiner onto H_j(R^{mu+3}) x H_{(mu-nu)/2+j}(R^{nu+3})"
    if why is not None:
        return {"status": "SKIPPED", "reason": why, "checks": []}
    mod = w_module(params, j)
    T = phi_target(params)
    checks = []
    level = mod.levels[j]
    images = [phi_map(params, j, e.k, e.l, e.phi, e.psi) for e in (mod.basis[i] for i in level)]
    # dimension identity
    exp_dim = w_dimension_product(params, j)
    checks.append(_check("w-dimension", {"j": j}, len(level) == exp_dim == w_dimension(params, j),
                         len(level), exp_dim, ref))
    # images are harmonic in both blocks and have the right bidegree
    harm = all(not T.mu_block.laplacian(f) and not T.nu_block.laplacian(f) for f in images)
    checks.append(_check("phi-harmonic", {"j": j}, harm, reference=ref))
    # injectivity
    ech = SparseEchelon()
    indep = all(ech.add(f.terms, n) for n, f in enumerate(images))
    checks.append(_check("phi-injective", {"j": j}, indep, len(ech), len(images), ref))
    # intertwining on sampled basis vectors
    if samples is None:
        step = max(1, len(level) // min_samples)
        samples = list(range(0, len(level), step))[: max(min_samples, 1)]
        if len(samples) < min_samples:
            samples = list(range(min(len(level), min_samples)))
    mb, nb = model_blocks(params)
    for s in samples:
        e = mod.basis[level[s]]
        for v in list(mb.indices) + list(nb.indices):
            img = apply_radial(bessel_pm(params, v), e.mixed)
            coords = mod.coordinates(img, j)
            if any(mod.basis[i].j != j for i in coords):
                checks.append(_check("phi-intertwine", {"j": j, "basis": s, "i": v}, False,
                                     "image leaves W_j", "", ref))
                continue
            # Phi(i (B - z)f) for x/theta, Phi(-i (B + y) f) for y; when the
            # y-block carries mu both signs flip, which amounts to reflecting
            # the extra coordinates s0, t0
            eps = I if v not in params.y_indices else -I
            if not params.split:
                eps = -eps
            rhs = _phi_of_mixed_combination(params, j, [
                (c * eps, mod.basis[i].k, mod.basis[i].l, mod.basis[i].phi, mod.basis[i].psi) for i, c in coords.items()])
            w = T.s0 if v in mb.indices else T.t0
            L = osp_generator(T.space, T.map_index(v), w)
            lhs = L.apply(images[s]).scale(2)
            ok = lhs == rhs
            checks.append(_check("phi-intertwine", {"j": j, "basis": s, "i": v}, ok,
                                 "" if ok else lhs, "" if ok else rhs, ref))
    status = "PASS" if all(c["status"] == "PASS" for c in checks) else "FAIL"
    return {"status": status, "checks": checks}


# ------------------------------------------------------------------ dimensions

def _block_dims(params: ModelParams) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """(even, odd) dimensions of the mu- and nu-blocks."""
    mb, nb = model_blocks(params)
    return (mb.m, mb.n_odd), (nb.m, nb.n_odd)


def w_dimension(params: ModelParams, j: int, l_cap: Optional[int] = None) -> int:
    """sum_{k <= j} sum_l dim H_k(mu-block) dim H_l(nu-block).

    For p+q odd the l-range is infinite and ``l_cap`` must truncate it.
    """
    if j < 0:
        return 0
    (m1, o1), (m2, o2) = _block_dims(params)
    if (params.p + params.q) % 2:
        if l_cap is None:
            raise ValueError("p+q odd: W_j is infinite-dimensional, give l_cap")
        lmax = l_cap
    else:
        lmax = (params.mu - params.nu) // 2 + j
    return sum(dim_formula(m1, o1, k) * dim_formula(m2, o2, l) for k in range(j + 1) for l in range(lmax + 1))


def w_dimension_product(params: ModelParams, j: int) -> int:
    """dim H_j(R^{mu+3}) dim H_{(mu-nu)/2+j}(R^{nu+3})."""
    (m1, o1), (m2, o2) = _block_dims(params)
    return dim_formula(m1 + 1, o1, j) * dim_formula(m2 + 1, o2, (params.mu - params.nu) // 2 + j)


def gk_dimension(params: ModelParams, k_max: Optional[int] = None) -> dict:
    """Growth degree of k -> sum_{j <= k} dim W_j by finite differences."""
    if k_max is None:
        k_max = 2 * params.n + 10
    truncated = (params.p + params.q) % 2 == 1
    seq = []
    tot = 0
    for k in range(k_max + 1):
        tot += w_dimension(params, k, l_cap=k_max if truncated else None)
        seq.append(tot)
    diffs = [seq]
    degree = None
    cur = seq
    for d in range(1, len(seq)):
        cur = [b - a for a, b in zip(cur, cur[1:])]
        diffs.append(cur)
        # constant and nonzero on the tail (at least three points)
        tail = cur[len(cur) // 2:]
        if len(tail) >= 3 and len(set(tail)) == 1 and tail[0] != 0:
            degree = d
            break
    if degree is None:
        raise ValueError("finite differences did not stabilise; increase k_max")
    return {"degree": degree, "sequence": seq, "truncated": truncated, "expected": params.p + params.q - 3}
