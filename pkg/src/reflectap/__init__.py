"""Solvers for x'' + a x(t) + b x(-t) = g(t) with almost periodic forcing."""

from .errors import *  # noqa: F401,F403
from .grid import GridFunction, KernelSpec, green_apply, residual_grid, sample
from .kernels import BACKEND
from .nonlinear import Monomial, Nonlinearity, PicardConfig, contraction_check, lipschitz_bound, picard_solve
from .spectral import (
    EquationParams,
    HomogeneousPart,
    bounded_solution,
    case1_homogeneous,
    case2_ivp,
    classify,
    harmonic_response,
    margins,
)
from .trigpoly import Frequency, FrequencyBasis, TrigPoly, module_compare, multiply
from .verify import bound_report, harmonic_balance_oracle, integrate_system, residual_spectral

__version__ = "0.1.0"
