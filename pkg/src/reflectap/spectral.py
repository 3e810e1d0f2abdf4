"""Closed-form solutions of x'' + a x(t) + b x(-t) = g(t) for trig-poly forcing.

Splitting x and g into even and odd parts decouples the reflection:

    even part:  x_e'' + (a + b) x_e = g_e
    odd part:   x_o'' + (a - b) x_o = g_o

so a cosine harmonic is divided by ``a + b - lambda^2`` and a sine harmonic by
``a - b - lambda^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams, Resonance, UnsupportedCase
from .trigpoly import TrigPoly

DEFAULT_RESONANCE_TOL = 1e-9
NEAR_RESONANCE_MARGIN = 1e-3


@dataclass(frozen=True)
class EquationParams:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise InvalidParams("a and b must be finite")
        if b == 0.0:
            raise InvalidParams("b must be nonzero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def even_rate2(self) -> float:
        """``a + b``: stiffness of the even channel."""
        return self.a + self.b

    @property
    def odd_rate2(self) -> float:
        """``a - b``: stiffness of the odd channel."""
        return self.a - self.b


@dataclass(frozen=True)
class Hyperbolic:
    """``a < b < -a``; odd channel decays at ``alpha``, even at ``beta``."""

    alpha: float
    beta: float
    regime = "Hyperbolic"


@dataclass(frozen=True)
class Oscillatory:
    """``-a < b < a``; odd channel oscillates at ``mu``, even at ``nu``."""

    mu: float
    nu: float
    regime = "Oscillatory"


@dataclass(frozen=True)
class Mixed:
    real_rate: float
    imag_rate: float
    regime = "Mixed"


@dataclass(frozen=True)
class Degenerate:
    regime = "Degenerate"


def classify(params: EquationParams):
    """Return the regime of ``(a, b)`` with its rates."""
    if not isinstance(params, EquationParams):
        params = EquationParams(*params)
    a, b = params.a, params.b
    s, d = b - a, -a - b
    if s == 0.0 or d == 0.0:
        return Degenerate()
    if s > 0 and d > 0:
        return Hyperbolic(alpha=math.sqrt(s), beta=math.sqrt(d))
    if s < 0 and d < 0:
        return Oscillatory(mu=math.sqrt(-s), nu=math.sqrt(-d))
    pos, neg = (s, d) if s > 0 else (d, s)
    return Mixed(real_rate=math.sqrt(pos), imag_rate=math.sqrt(-neg))


@dataclass(frozen=True)
class HarmonicResponse:
    """``x = p e^{i lam t} + q e^{-i lam t}`` answers forcing ``e^{i lam t}``."""

    p_coeff: complex
    q_coeff: complex

    @property
    def cos_gain(self) -> float:
        return (self.p_coeff + self.q_coeff).real

    @property
    def sin_gain(self) -> float:
        return (self.p_coeff - self.q_coeff).real


def _near_zero(divisor: float, scale: float, tol: float) -> bool:
    return abs(divisor) <= tol * max(1.0, scale)


def harmonic_response(params: EquationParams, lam: float, resonance_tol: float = DEFAULT_RESONANCE_TOL) -> HarmonicResponse:
    """Response of both exponentials to unit forcing at ``lam``.

    Raises
    ------
    Resonance
        If ``D = (a - lam^2)^2 - b^2`` is below ``resonance_tol`` relative to
        ``max(1, (a - lam^2)^2, b^2)``.
    """
    c = params.a - lam * lam
    D = c * c - params.b * params.b
    if _near_zero(D, max(c * c, params.b * params.b), resonance_tol):
        raise Resonance(lam, f"D = {D:.3g}")
    return HarmonicResponse(p_coeff=complex(c / D), q_coeff=complex(-params.b / D))


def _check_solvable(spec):
    if isinstance(spec, (Hyperbolic, Oscillatory)):
        return
    raise UnsupportedCase(f"{spec.regime} regime is not supported by the solvers")


def bounded_solution(params: EquationParams, g: TrigPoly, resonance_tol: float = DEFAULT_RESONANCE_TOL) -> TrigPoly:
    """Unique bounded (Hyperbolic) or almost periodic (Oscillatory) solution.

    A divisor near zero only raises :class:`Resonance` when the matching
    forcing coefficient is nonzero.
    """
    _check_solvable(classify(params))
    ce, co = params.even_rate2, params.odd_rate2
    store = {}
    for f, (A, B) in g.terms.items():
        lam = f.value(g.basis)
        l2 = lam * lam
        de, do = ce - l2, co - l2
        xa = xb = 0.0
        if A != 0.0:
            if _near_zero(de, max(abs(ce), l2), resonance_tol):
                raise Resonance(lam, "cosine harmonic meets the even-channel rate")
            xa = A / de
        if B != 0.0:
            if _near_zero(do, max(abs(co), l2), resonance_tol):
                raise Resonance(lam, "sine harmonic meets the odd-channel rate")
            xb = B / do
        store[f] = (xa, xb)
    return TrigPoly(g.basis, store)


@dataclass(frozen=True)
class HomogeneousPart:
    k1: float
    k2: float


def case1_homogeneous(params: EquationParams, k: HomogeneousPart, t):
    """``k1 (e^{alpha t} - e^{-alpha t}) + k2 (e^{beta t} + e^{-beta t})``."""
    spec = classify(params)
    if not isinstance(spec, Hyperbolic):
        raise UnsupportedCase("case1_homogeneous needs the Hyperbolic regime")
    t = np.asarray(t, dtype=float)
    val = 2.0 * k.k1 * np.sinh(spec.alpha * t) + 2.0 * k.k2 * np.cosh(spec.beta * t)
    return float(val) if val.ndim == 0 else val


def grows_without_bound(values, factor: float = 1e3) -> bool:
    """Growth test on ``|values|`` sampled along an increasing ``t`` sequence.

    True when the magnitudes increase strictly and the last exceeds the first
    nonzero one by ``factor``.
    """
    m = np.abs(np.asarray(values, dtype=float))
    if m.size < 2 or not np.all(np.diff(m) > 0):
        return False
    first = m[m > 0]
    return bool(first.size and m[-1] > factor * first[0])


@dataclass(frozen=True)
class MarginReport:
    theorem_margin_mu: float
    theorem_margin_nu: float
    sharp_margin_odd: float
    sharp_margin_even: float

    @property
    def theorem_hypothesis_holds(self) -> bool:
        return self.theorem_margin_mu > 0 and self.theorem_margin_nu > 0

    @property
    def near_resonance(self) -> bool:
        return min(self.sharp_margin_odd, self.sharp_margin_even) < NEAR_RESONANCE_MARGIN


def margins(params: EquationParams, g: TrigPoly) -> MarginReport:
    """Distances of forcing frequencies to the natural rates ``mu`` and ``nu``.

    Theorem margins take every frequency of ``g``; sharp margins only pair
    sine terms with ``mu`` and cosine terms with ``nu``.
    """
    spec = classify(params)
    if not isinstance(spec, Oscillatory):
        raise UnsupportedCase("margins are defined in the Oscillatory regime")
    mu, nu = spec.mu, spec.nu
    inf = math.inf
    th_mu = th_nu = sh_odd = sh_even = inf
    for _, lam, A, B in g.items():
        lam = abs(lam)
        dm, dn = abs(mu - lam), abs(nu - lam)
        th_mu = min(th_mu, dm)
        th_nu = min(th_nu, dn)
        if B != 0.0:
            sh_odd = min(sh_odd, dm)
        if A != 0.0:
            sh_even = min(sh_even, dn)
    return MarginReport(th_mu, th_nu, sh_odd, sh_even)


@dataclass(frozen=True)
class Case2Solution:
    """``particular(t) + sin_mu * sin(mu t) + cos_nu * cos(nu t)``."""

    particular: TrigPoly
    sin_mu: float
    cos_nu: float
    mu: float
    nu: float

    def evaluate(self, t, order: int = 0):
        t = np.asarray(t, dtype=float)
        p = self.particular.derivative(order) if order else self.particular
        s = self.sin_mu * self.mu**order * np.sin(self.mu * t + order * math.pi / 2)
        c = self.cos_nu * self.nu**order * np.cos(self.nu * t + order * math.pi / 2)
        val = p.evaluate(t) + s + c
        return float(val) if np.ndim(val) == 0 else val

    __call__ = evaluate


def case2_ivp(params: EquationParams, g: TrigPoly, x0: float, xdot0: float, resonance_tol: float = DEFAULT_RESONANCE_TOL) -> Case2Solution:
    """Almost periodic solution with ``x(0) = x0`` and ``x'(0) = xdot0``.

    The homogeneous family is ``{sin(mu t), cos(nu t)}``; its coefficients
    absorb the particular solution's own value and slope at 0.
    """
    spec = classify(params)
    if not isinstance(spec, Oscillatory):
        raise UnsupportedCase("initial-value solutions are provided in the Oscillatory regime only")
    xp = bounded_solution(params, g, resonance_tol)
    cos_nu = x0 - xp.evaluate(0.0)
    sin_mu = (xdot0 - xp.derivative(1).evaluate(0.0)) / spec.mu
    return Case2Solution(xp, sin_mu, cos_nu, spec.mu, spec.nu)
