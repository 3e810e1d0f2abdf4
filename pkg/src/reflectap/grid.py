"""Sampled functions on reflection-closed grids and Case-1 Green quadrature."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidGrid, UnsupportedCase
from .spectral import EquationParams, Hyperbolic, classify
from .trigpoly import TrigPoly

DEFAULT_H = 0.005
DEFAULT_TAIL_CUT = 1e-7


def grid_size(T: float, h: float) -> int:
    """Number ``N`` of steps per half window; ``T / h`` must be integral."""
    if not (T > 0 and h > 0 and math.isfinite(T) and math.isfinite(h)):
        raise InvalidGrid(f"need T > 0 and h > 0, got T={T!r}, h={h!r}")
    n = round(T / h)
    if n < 1 or abs(n * h - T) > 1e-9 * max(T, 1.0):
        raise InvalidGrid(f"T/h = {T / h!r} is not an integer")
    return n


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples at ``t_j = -T + j h``, ``j = 0..2N``.

    ``interior`` is the half width on which the samples are trusted and
    ``tail_bound`` the truncation error allowance there.
    """

    T: float
    h: float
    samples: np.ndarray
    interior: float | None = None
    tail_bound: float = 0.0

    def __post_init__(self):
        n = grid_size(self.T, self.h)
        s = np.asarray(self.samples, dtype=float)
        if s.shape != (2 * n + 1,):
            raise InvalidGrid(f"expected {2 * n + 1} samples, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise InvalidGrid("samples must be finite")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "interior", self.T if self.interior is None else min(self.interior, self.T))

    @property
    def N(self) -> int:
        return (self.samples.size - 1) // 2

    @property
    def t(self) -> np.ndarray:
        return (np.arange(self.samples.size) - self.N) * self.h

    def reflected(self) -> np.ndarray:
        """Samples of ``x(-t)``, read exactly from the mirrored nodes."""
        return self.samples[::-1]

    def interior_mask(self) -> np.ndarray:
        return np.abs(self.t) <= self.interior + 1e-12 * self.T

    def same_grid(self, other: "GridFunction") -> bool:
        return self.samples.size == other.samples.size and abs(self.h - other.h) <= 1e-12 * self.h

    def with_samples(self, samples, **kw) -> "GridFunction":
        args = dict(T=self.T, h=self.h, samples=samples, interior=self.interior, tail_bound=self.tail_bound)
        args.update(kw)
        return GridFunction(**args)

    def sup(self) -> float:
        return float(np.max(np.abs(self.samples)))


def sample(p: TrigPoly, T: float, h: float) -> GridFunction:
    n = grid_size(T, h)
    t = (np.arange(2 * n + 1) - n) * h
    return GridFunction(T, h, p.evaluate(t))


@dataclass(frozen=True)
class KernelSpec:
    alpha: float
    beta: float
    tail_cut: float = DEFAULT_TAIL_CUT

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("kernel rates must be positive")
        if not 0 < self.tail_cut < 1:
            raise ValueError("tail_cut must lie in (0, 1)")

    @classmethod
    def for_params(cls, params: EquationParams, tail_cut: float = DEFAULT_TAIL_CUT) -> "KernelSpec":
        spec = classify(params)
        if not isinstance(spec, Hyperbolic):
            raise UnsupportedCase("grid Green quadrature needs the Hyperbolic regime")
        return cls(spec.alpha, spec.beta, tail_cut)

    def margin(self) -> float:
        """Distance from the window edge beyond which tails are below ``tail_cut``."""
        return math.log(1.0 / self.tail_cut) / min(self.alpha, self.beta)


def _decaying_green(u: np.ndarray, gamma: float, h: float) -> np.ndarray:
    # -(1/2 gamma) * trapezoid of  int e^{-gamma |t-s|} u(s) ds  over the window
    w = np.full(u.size, h)
    w[0] = w[-1] = 0.5 * h
    return -kernels.exp_convolve(w * u, math.exp(-gamma * h)) / (2.0 * gamma)


def green_apply(params: EquationParams, g: GridFunction, spec: KernelSpec | None = None) -> GridFunction:
    """Bounded Case-1 solution of the equation for sampled forcing.

    The odd part of ``g`` is convolved with ``e^{-alpha|t-s|}`` and the even
    part with ``e^{-beta|t-s|}``. Tails outside the window are dropped; the
    result records the interior half width where they stay below
    ``spec.tail_cut`` and a bound on their contribution there.
    """
    if spec is None:
        spec = KernelSpec.for_params(params)
    else:
        KernelSpec.for_params(params)
    s = g.samples
    r = s[::-1]
    even = 0.5 * (s + r)
    odd = 0.5 * (s - r)
    x = _decaying_green(even, spec.beta, g.h) + _decaying_green(odd, spec.alpha, g.h)
    interior = max(0.0, g.T - spec.margin())
    sup_g = g.sup()
    tail = sup_g * (math.exp(-spec.beta * (g.T - interior)) / spec.beta**2 + math.exp(-spec.alpha * (g.T - interior)) / spec.alpha**2)
    return GridFunction(g.T, g.h, x, interior=interior, tail_bound=tail)


def residual_nodes(params: EquationParams, x: GridFunction, g: GridFunction) -> np.ndarray:
    """Pointwise residual with 3-point second differences; edge nodes are NaN."""
    if not x.same_grid(g):
        raise InvalidGrid("x and g live on different grids")
    s = x.samples
    out = np.full(s.size, np.nan)
    d2 = (s[2:] - 2.0 * s[1:-1] + s[:-2]) / (x.h * x.h)
    out[1:-1] = d2 + params.a * s[1:-1] + params.b * s[::-1][1:-1] - g.samples[1:-1]
    return out


def residual_grid(params: EquationParams, x: GridFunction, g: GridFunction) -> float:
    """Max residual over interior nodes, edges excluded."""
    r = residual_nodes(params, x, g)
    mask = x.interior_mask()
    mask[0] = mask[-1] = False
    vals = r[mask]
    return float(np.max(np.abs(vals))) if vals.size else 0.0
