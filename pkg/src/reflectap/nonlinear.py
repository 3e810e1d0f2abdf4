"""Picard iteration for x'' + a x(t) + b x(-t) = f(t, x(t), x(-t)) in Case 1.

``f`` is a trigonometric forcing plus a sum of monomials ``c x(t)^p x(-t)^q``.
Each step solves the linear problem with the grid Green operator.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MaxIterations, NonContractive, RadiusExceeded, UnsupportedCase
from .grid import DEFAULT_H, DEFAULT_TAIL_CUT, GridFunction, KernelSpec, green_apply, residual_grid, sample
from .spectral import EquationParams, Hyperbolic, classify
from .trigpoly import TrigPoly

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Monomial:
    c: float
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p + self.q < 1:
            raise ValueError("monomial exponents must be >= 0 with p + q >= 1")


@dataclass(frozen=True)
class Nonlinearity:
    forcing: TrigPoly
    monomials: tuple[Monomial, ...] = ()
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "monomials", tuple(self.monomials))

    def apply(self, forcing_samples: np.ndarray, x: np.ndarray) -> np.ndarray:
        """``f`` on the grid given samples of the forcing and of ``x``."""
        y = x[::-1]
        out = np.array(forcing_samples, dtype=float, copy=True)
        for m in self.monomials:
            out += m.c * x**m.p * y**m.q
        return out


@dataclass(frozen=True)
class PicardConfig:
    tol: float = 1e-10
    max_iter: int = 200
    T: float = 40.0
    h: float = DEFAULT_H
    tail_cut: float = DEFAULT_TAIL_CUT

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


def lipschitz_bound(nl: Nonlinearity) -> float:
    """Lipschitz constant of the monomial sum on ``|x|, |y| <= R``.

    Uses ``|c| max(p, q) R^(p+q-1)`` per monomial, which bounds both partial
    derivatives on the ball and hence the ``L(|dx| + |dy|)`` form.
    """
    R = nl.radius
    return math.fsum(abs(m.c) * max(m.p, m.q) * R ** (m.p + m.q - 1) for m in nl.monomials)


@dataclass(frozen=True)
class ContractionCheck:
    paper_ok: bool
    derived_ok: bool
    paper_threshold: float
    derived_threshold: float
    paper_rate: float
    derived_rate: float

    @property
    def governing(self) -> str:
        if self.derived_ok:
            return "derived"
        if self.paper_ok:
            return "paper"
        return "none"

    @property
    def governing_rate(self) -> float:
        return {"derived": self.derived_rate, "paper": self.paper_rate}.get(self.governing, math.inf)


def contraction_check(params: EquationParams, L: float) -> ContractionCheck:
    """Both sufficient conditions for the Picard map to contract.

    ``paper``: ``L < alpha / (4 (1 + alpha))`` with rate ``4 L (1/alpha + 1)``.
    ``derived``: rate ``2 L (1/alpha^2 + 1/beta^2) < 1``; the Green operator
    has sup-norm gain at most ``1/alpha^2 + 1/beta^2`` and ``f`` contributes
    ``2 L`` since both ``x(t)`` and ``x(-t)`` move.
    """
    spec = classify(params)
    if not isinstance(spec, Hyperbolic):
        raise UnsupportedCase("contraction analysis needs the Hyperbolic regime")
    al, be = spec.alpha, spec.beta
    gain = 1.0 / al**2 + 1.0 / be**2
    paper_threshold = al / (4.0 * (1.0 + al))
    derived_threshold = 1.0 / (2.0 * gain)
    return ContractionCheck(
        paper_ok=L < paper_threshold,
        derived_ok=L < derived_threshold,
        paper_threshold=paper_threshold,
        derived_threshold=derived_threshold,
        paper_rate=4.0 * L * (1.0 / al + 1.0),
        derived_rate=2.0 * L * gain,
    )


@dataclass
class PicardReport:
    iterations: int
    final_increment: float
    measured_rate: float
    governing: str
    governing_rate: float
    contraction: ContractionCheck
    lipschitz: float
    residual: float
    residual_floor: float
    increments: list = field(default_factory=list)

    @property
    def residual_ok(self) -> bool:
        return self.residual <= self.residual_floor


def quadrature_floor(params: EquationParams, h: float, sup_g: float, tol: float) -> float:
    """Residual level expected from O(h^2) quadrature and differencing."""
    return max(10.0 * tol, h * h * (1.0 + abs(params.a) + abs(params.b)) * max(sup_g, 1e-300))


def picard_solve(params: EquationParams, nl: Nonlinearity, cfg: PicardConfig = PicardConfig(), start=None):
    """Iterate ``x <- G f(., x, x(-.))`` from ``start`` (default 0).

    Returns
    -------
    x : GridFunction
    report : PicardReport

    Raises
    ------
    NonContractive, RadiusExceeded, MaxIterations
    """
    kspec = KernelSpec.for_params(params, cfg.tail_cut)
    L = lipschitz_bound(nl)
    check = contraction_check(params, L)
    if check.governing == "none":
        raise NonContractive(
            f"L = {L:.6g} fails both L < {check.paper_threshold:.6g} and L < {check.derived_threshold:.6g}"
        )
    if check.paper_ok != check.derived_ok:
        log.info("contraction criteria disagree: paper_ok=%s derived_ok=%s", check.paper_ok, check.derived_ok)

    forcing = sample(nl.forcing, cfg.T, cfg.h).samples
    if start is None:
        x = np.zeros_like(forcing)
    elif isinstance(start, GridFunction):
        x = np.array(start.samples)
    elif isinstance(start, TrigPoly):
        x = sample(start, cfg.T, cfg.h).samples.copy()
    else:
        x = np.asarray(start, dtype=float).copy()
    if x.shape != forcing.shape:
        raise ValueError("start iterate has the wrong number of nodes")

    incs = []
    xg = None
    for it in range(1, cfg.max_iter + 1):
        g = GridFunction(cfg.T, cfg.h, nl.apply(forcing, x))
        xg = green_apply(params, g, kspec)
        sup = xg.sup()
        if sup > nl.radius:
            raise RadiusExceeded(it, sup, nl.radius)
        inc = float(np.max(np.abs(xg.samples - x)))
        incs.append(inc)
        x = np.array(xg.samples)
        if inc <= cfg.tol:
            break
    else:
        raise MaxIterations(f"no convergence in {cfg.max_iter} iterations, last increment {incs[-1]:.3g}")

    g_eff = GridFunction(cfg.T, cfg.h, nl.apply(forcing, x), interior=xg.interior)
    res = residual_grid(params, xg, g_eff)
    floor = quadrature_floor(params, cfg.h, g_eff.sup(), cfg.tol)

    # ratios are meaningless once increments reach round-off
    eps_floor = 1e3 * np.finfo(float).eps * max(1.0, xg.sup())
    ratios = [incs[i + 1] / incs[i] for i in range(len(incs) - 1) if incs[i] > eps_floor]
    rate = max(ratios) if ratios else 0.0

    report = PicardReport(
        iterations=len(incs),
        final_increment=incs[-1],
        measured_rate=rate,
        governing=check.governing,
        governing_rate=check.governing_rate,
        contraction=check,
        lipschitz=L,
        residual=res,
        residual_floor=floor,
        increments=incs,
    )
    return xg, report
