"""Exact computations for the minimal representation of osp(p,q|2n)."""

from .scalars import ExactScalar, gamma_half, gamma_value, pochhammer
from .superpoly import ModelParams, Space, SuperPolynomial, r_squared, reduce_mod_r2
from .operators import DifferentialOperator, compose, formal_adjoint, supercommutator
from .liealg import TKKAlgebra, bessel_operator, pi_lambda, tkk_algebra
from .harmonics import Block, dim_formula, harmonic_basis
from .radial import MixedElement, RadialElement, laguerre
from .minrep import act, gk_dimension, w_module
from .orbitfunc import OrbitFunction, orbit_integral, radial_moment, sesquilinear
from .fourier import fourier_symbol, pi_hat

__version__ = "0.1.0"

__all__ = [
    "ExactScalar",
    "gamma_half",
    "gamma_value",
    "pochhammer",
    "ModelParams",
    "Space",
    "SuperPolynomial",
    "r_squared",
    "reduce_mod_r2",
    "DifferentialOperator",
    "compose",
    "formal_adjoint",
    "supercommutator",
    "TKKAlgebra",
    "bessel_operator",
    "pi_lambda",
    "tkk_algebra",
    "Block",
    "dim_formula",
    "harmonic_basis",
    "MixedElement",
    "RadialElement",
    "laguerre",
    "act",
    "gk_dimension",
    "w_module",
    "OrbitFunction",
    "orbit_integral",
    "radial_moment",
    "sesquilinear",
    "fourier_symbol",
    "pi_hat",
]
