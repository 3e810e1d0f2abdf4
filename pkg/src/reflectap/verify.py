"""Independent checks for computed solutions.

Three routes that share no solving code with :mod:`reflectap.spectral`:
exact coefficient residuals, a dense harmonic-balance solve, and RK4 on the
four-dimensional system for ``(x(t), x(-t), x'(t), x'(-t))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidGrid, SingularSystem, UnsupportedCase
from .grid import GridFunction, grid_size
from .spectral import EquationParams, Hyperbolic, classify
from .trigpoly import TrigPoly

# state x = (x(t), x(-t), x'(t), x'(-t)) obeys x' = SYSTEM_MATRIX x + (0, 0, g(t), -g(-t))


def system_matrix(params: EquationParams) -> np.ndarray:
    a, b = params.a, params.b
    return np.array(
        [
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [-a, -b, 0.0, 0.0],
            [b, a, 0.0, 0.0],
        ]
    )


def eigen_transform(alpha: float, beta: float) -> np.ndarray:
    """Columns are eigenvectors of the system matrix for ``alpha, -alpha, beta, -beta``."""
    return np.array(
        [
            [1.0, -1.0, -1.0, 1.0],
            [-1.0, 1.0, -1.0, 1.0],
            [alpha, alpha, -beta, -beta],
            [alpha, alpha, beta, beta],
        ]
    )


def residual_polynomial(params: EquationParams, x: TrigPoly, g: TrigPoly) -> TrigPoly:
    return x.derivative(2) + x.scale(params.a) + x.reflect().scale(params.b) - g


def residual_spectral(params: EquationParams, x: TrigPoly, g: TrigPoly) -> float:
    """Coefficient-sum bound of ``x'' + a x + b x(-t) - g``; 0 means exact."""
    return residual_polynomial(params, x, g).coefficient_sum()


def harmonic_balance_oracle(params: EquationParams, g: TrigPoly, rcond: float = 1e-12) -> TrigPoly:
    """Solve for all cosine and sine coefficients at once by a dense solve.

    Unknowns are ``(C_k, S_k)`` for every frequency of ``g`` (no sine unknown
    at frequency 0). Singular directions are accepted only if unforced, in
    which case the minimum-norm solution sets them to zero.
    """
    items = g.items()
    cols = []
    for idx, (f, lam, _, _) in enumerate(items):
        cols.append((idx, "c"))
        if not f.is_zero():
            cols.append((idx, "s"))
    n = len(cols)
    if n == 0:
        return TrigPoly.zero(g.basis)
    M = np.zeros((n, n))
    rhs = np.zeros(n)
    for row, (idx, kind) in enumerate(cols):
        f, lam, A, B = items[idx]
        rhs[row] = A if kind == "c" else B
        for col, (jdx, jkind) in enumerate(cols):
            if jdx != idx or jkind != kind:
                continue
            # x'' contributes -lam^2, a x contributes a, b x(-t) keeps cos and flips sin
            refl = params.b if kind == "c" else -params.b
            M[row, col] = -lam * lam + params.a + refl
    scale = np.max(np.abs(M)) if n else 1.0
    sol, *_ = np.linalg.lstsq(M, rhs, rcond=rcond)
    sv = np.linalg.svd(M, compute_uv=False)
    if sv.size and sv[-1] <= rcond * max(scale, 1.0):
        resid = np.max(np.abs(M @ sol - rhs))
        if resid > 1e-9 * max(1.0, np.max(np.abs(rhs))):
            raise SingularSystem(f"forced singular harmonic-balance system (residual {resid:.3g})")
    terms = []
    for (idx, kind), v in zip(cols, sol):
        f = items[idx][0]
        terms.append((f, v, 0.0) if kind == "c" else (f, 0.0, v))
    return TrigPoly.from_terms(g.basis, terms)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """RK4 sweeps from ``t = 0`` toward ``+T`` and ``-T``.

    ``forward[k]`` is the state at ``k h``, ``backward[k]`` at ``-k h``.
    ``x`` and ``xdot`` assemble the first and third components over
    ``[-T, T]``; ``constraint_error`` compares the second component of each
    sweep with the first component of the other.
    """

    forward: np.ndarray
    backward: np.ndarray
    x: GridFunction
    xdot: GridFunction
    constraint_error: float


def integrate_system(params: EquationParams, g: TrigPoly, x_at_0: float, xdot_at_0: float, T: float, h: float) -> Trajectory:
    n = grid_size(T, h)
    half = np.arange(2 * n + 1) * (0.5 * h)
    gp = g.evaluate(half)
    gm = g.evaluate(-half)
    y0 = np.array([x_at_0, x_at_0, xdot_at_0, xdot_at_0])
    fwd = kernels.rk4_sweep(params.a, params.b, h, gp, gm, y0)
    bwd = kernels.rk4_sweep(params.a, params.b, -h, gm, gp, y0)
    xs = np.concatenate([bwd[:0:-1, 0], fwd[:, 0]])
    vs = np.concatenate([bwd[:0:-1, 2], fwd[:, 2]])
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(vs))):
        raise InvalidGrid("integration overflowed on this window")
    cerr = max(
        float(np.max(np.abs(fwd[:, 1] - bwd[:, 0]))),
        float(np.max(np.abs(bwd[:, 1] - fwd[:, 0]))),
        float(np.max(np.abs(fwd[:, 3] - bwd[:, 2]))),
        float(np.max(np.abs(bwd[:, 3] - fwd[:, 2]))),
    )
    return Trajectory(fwd, bwd, GridFunction(T, h, xs), GridFunction(T, h, vs), cerr)


def growth_rate(t, deviation) -> float:
    """Least-squares slope of ``log|deviation|`` against ``t``."""
    t = np.asarray(t, dtype=float)
    d = np.abs(np.asarray(deviation, dtype=float))
    keep = d > 0
    slope, _ = np.polyfit(t[keep], np.log(d[keep]), 1)
    return float(slope)


@dataclass(frozen=True)
class BoundReport:
    ratio: float
    derived_constant: float
    paper_constant: float
    derived_holds: bool
    paper_holds: bool
    x_bounds: tuple[float, float]
    g_bounds: tuple[float, float]


def bound_report(params: EquationParams, g: TrigPoly, x: TrigPoly, grid_points: int = 200_001) -> BoundReport:
    """Compare ``sup|x| / sup|g|`` with both sup-norm constants.

    ``ratio`` is (upper bound of sup|x|) / (lower estimate of sup|g|). A
    constant is declared violated only when the sampled lower bound of
    sup|x| exceeds the constant times the upper bound of sup|g|, so every
    reported violation is genuine.
    """
    spec = classify(params)
    if not isinstance(spec, Hyperbolic):
        raise UnsupportedCase("bound checks need the Hyperbolic regime")
    derived = 1.0 / spec.alpha**2 + 1.0 / spec.beta**2
    paper = 2.0 / spec.alpha + 1.0
    xl, xu = x.sup_norm_bounds(grid_points)
    gl, gu = g.sup_norm_bounds(grid_points)
    if xu == 0.0:
        ratio = 0.0
    elif gl == 0.0:
        ratio = math.inf
    else:
        ratio = xu / gl
    return BoundReport(
        ratio=ratio,
        derived_constant=derived,
        paper_constant=paper,
        derived_holds=not (xl > derived * gu),
        paper_holds=not (xl > paper * gu),
        x_bounds=(xl, xu),
        g_bounds=(gl, gu),
    )
