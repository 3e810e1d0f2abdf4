"""Real trigonometric polynomials over a declared frequency basis.

A frequency is an exact rational combination of the basis generators. Terms
are stored at the canonical representative whose first nonzero coordinate is
positive, as a (cosine, sine) coefficient pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .errors import BasisMismatch, FrequencyNearZero
from .lattice import compare_lattices


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite frequency coordinate {x!r}")
        return Fraction(x).limit_denominator(10**12)
    return Fraction(x)


@dataclass(frozen=True)
class FrequencyBasis:
    """Generators assumed rationally independent; this is not checked."""

    generators: tuple[float, ...]

    def __post_init__(self):
        gens = tuple(float(g) for g in self.generators)
        if not gens:
            raise ValueError("frequency basis must be nonempty")
        if any(not math.isfinite(g) or g <= 0 for g in gens):
            raise ValueError("basis generators must be finite and > 0")
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate basis generators")
        object.__setattr__(self, "generators", gens)

    def __len__(self):
        return len(self.generators)


@dataclass(frozen=True)
class Frequency:
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(_as_fraction(c) for c in self.coords))

    @classmethod
    def of(cls, *coords) -> "Frequency":
        return cls(tuple(coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def sign(self) -> int:
        for c in self.coords:
            if c:
                return 1 if c > 0 else -1
        return 0

    def __neg__(self) -> "Frequency":
        return Frequency(tuple(-c for c in self.coords))

    def __add__(self, other: "Frequency") -> "Frequency":
        return Frequency(tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: "Frequency") -> "Frequency":
        return Frequency(tuple(x - y for x, y in zip(self.coords, other.coords)))

    def canonical(self) -> "Frequency":
        return -self if self.sign() < 0 else self

    def value(self, basis: FrequencyBasis) -> float:
        return math.fsum(float(c) * g for c, g in zip(self.coords, basis.generators))


def _accumulate(store: dict, freq: Frequency, A: float, B: float) -> None:
    if freq.sign() < 0:
        freq, B = -freq, -B
    if freq.is_zero():
        B = 0.0
    a0, b0 = store.get(freq, (0.0, 0.0))
    store[freq] = (a0 + A, b0 + B)


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """Finite sum of ``A cos(lambda t) + B sin(lambda t)``.

    Build with :meth:`from_terms`, which folds signs and merges duplicates.
    """

    basis: FrequencyBasis
    terms: Mapping[Frequency, tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self):
        store: dict = {}
        n = len(self.basis)
        for f, (A, B) in dict(self.terms).items():
            if len(f.coords) != n:
                raise BasisMismatch(f"frequency has {len(f.coords)} coordinates, basis has {n}")
            _accumulate(store, f, float(A), float(B))
        clean = {f: ab for f, ab in store.items() if ab[0] != 0.0 or ab[1] != 0.0}
        object.__setattr__(self, "terms", clean)

    # construction

    @classmethod
    def from_terms(cls, basis: FrequencyBasis, terms: Iterable) -> "TrigPoly":
        """``terms`` yields ``(coords, A, B)`` triples."""
        store: dict = {}
        for coords, A, B in terms:
            f = coords if isinstance(coords, Frequency) else Frequency(tuple(coords))
            if len(f.coords) != len(basis):
                raise BasisMismatch(f"frequency has {len(f.coords)} coordinates, basis has {len(basis)}")
            _accumulate(store, f, float(A), float(B))
        return cls(basis, store)

    @classmethod
    def zero(cls, basis: FrequencyBasis) -> "TrigPoly":
        return cls(basis, {})

    @classmethod
    def constant(cls, basis: FrequencyBasis, c: float) -> "TrigPoly":
        return cls.from_terms(basis, [((0,) * len(basis), c, 0.0)])

    @classmethod
    def cos(cls, basis: FrequencyBasis, coords, amp: float = 1.0) -> "TrigPoly":
        return cls.from_terms(basis, [(coords, amp, 0.0)])

    @classmethod
    def sin(cls, basis: FrequencyBasis, coords, amp: float = 1.0) -> "TrigPoly":
        return cls.from_terms(basis, [(coords, 0.0, amp)])

    # inspection

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def frequencies(self) -> list[Frequency]:
        return sorted(self.terms, key=lambda f: (f.value(self.basis), f.coords))

    def items(self):
        """Terms as ``(frequency, value, A, B)`` sorted by frequency value."""
        return [(f, f.value(self.basis), *self.terms[f]) for f in self.frequencies()]

    def coefficient(self, coords) -> tuple[float, float]:
        f = coords if isinstance(coords, Frequency) else Frequency(tuple(coords))
        if f.sign() < 0:
            A, B = self.terms.get(-f, (0.0, 0.0))
            return A, -B
        return self.terms.get(f, (0.0, 0.0))

    def coefficient_sum(self) -> float:
        """``sum sqrt(A^2 + B^2)``, an upper bound for the sup norm."""
        return math.fsum(math.hypot(A, B) for A, B in self.terms.values())

    def max_coefficient_difference(self, other: "TrigPoly") -> float:
        self._check_basis(other)
        keys = set(self.terms) | set(other.terms)
        worst = 0.0
        for f in keys:
            a1, b1 = self.terms.get(f, (0.0, 0.0))
            a2, b2 = other.terms.get(f, (0.0, 0.0))
            worst = max(worst, abs(a1 - a2), abs(b1 - b2))
        return worst

    def __eq__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self.basis == other.basis and self.terms == other.terms

    __hash__ = None

    def _check_basis(self, other: "TrigPoly") -> None:
        if self.basis != other.basis:
            raise BasisMismatch("trigonometric polynomials use different bases")

    # evaluation

    def evaluate(self, t):
        """Value at ``t`` (scalar or array)."""
        scalar = np.ndim(t) == 0
        tt = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros(tt.shape)
        if self.terms:
            items = self.items()
            lam = np.array([it[1] for it in items])
            A = np.array([it[2] for it in items])
            B = np.array([it[3] for it in items])
            flat = tt.reshape(-1)
            res = np.empty(flat.shape)
            chunk = max(1, 2_000_000 // len(lam))
            for s in range(0, flat.size, chunk):
                ph = np.multiply.outer(flat[s : s + chunk], lam)
                res[s : s + chunk] = np.cos(ph) @ A + np.sin(ph) @ B
            out = res.reshape(tt.shape)
        return float(out[0]) if scalar else out

    __call__ = evaluate

    # algebra

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            return NotImplemented
        self._check_basis(other)
        store = dict(self.terms)
        for f, (A, B) in other.terms.items():
            a0, b0 = store.get(f, (0.0, 0.0))
            store[f] = (a0 + A, b0 + B)
        return TrigPoly(self.basis, store)

    def __neg__(self) -> "TrigPoly":
        return TrigPoly(self.basis, {f: (-A, -B) for f, (A, B) in self.terms.items()})

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, c: float) -> "TrigPoly":
        return TrigPoly(self.basis, {f: (c * A, c * B) for f, (A, B) in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            return multiply(self, other)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self.scale(float(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self.scale(float(other))
        return NotImplemented

    def reflect(self) -> "TrigPoly":
        """``t -> p(-t)``: sine coefficients change sign."""
        return TrigPoly(self.basis, {f: (A, -B) for f, (A, B) in self.terms.items()})

    def parity_split(self) -> tuple["TrigPoly", "TrigPoly"]:
        even = TrigPoly(self.basis, {f: (A, 0.0) for f, (A, _) in self.terms.items()})
        odd = TrigPoly(self.basis, {f: (0.0, B) for f, (_, B) in self.terms.items()})
        return even, odd

    def derivative(self, order: int = 1) -> "TrigPoly":
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        store = {}
        for f, (A, B) in self.terms.items():
            lam = f.value(self.basis)
            for _ in range(order):
                A, B = lam * B, -lam * A
            store[f] = (A, B)
        return TrigPoly(self.basis, store)

    def antiderivative(self, zero_margin: float) -> "TrigPoly":
        """Zero-mean antiderivative; every ``|lambda|`` must reach ``zero_margin``."""
        if not zero_margin > 0:
            raise ValueError("zero_margin must be positive")
        store = {}
        for f, (A, B) in self.terms.items():
            lam = f.value(self.basis)
            if abs(lam) < zero_margin:
                raise FrequencyNearZero(lam, zero_margin)
            store[f] = (-B / lam, A / lam)
        return TrigPoly(self.basis, store)

    def sup_norm_bounds(self, grid_points: int = 200_001, periods: float = 64.0) -> tuple[float, float]:
        """Return ``(lower, upper)`` with ``lower <= sup|p| <= upper``.

        ``upper`` is the coefficient sum; ``lower`` is the largest sampled
        ``|p|`` on a symmetric window spanning ``periods`` periods of the
        slowest nonzero harmonic.
        """
        if grid_points < 2:
            raise ValueError("grid_points must be >= 2")
        upper = self.coefficient_sum()
        if not self.terms:
            return 0.0, 0.0
        lams = [abs(v) for _, v, _, _ in self.items() if v != 0.0]
        W = periods * 2 * math.pi / min(lams) if lams else 1.0
        t = np.linspace(-W, W, grid_points)
        lower = float(np.max(np.abs(self.evaluate(t))))
        lower = max(lower, abs(self.evaluate(0.0)))
        return min(lower, upper), upper

    def module_generators(self) -> list[tuple[Fraction, ...]]:
        return [f.coords for f in self.terms if not f.is_zero()]

    def __repr__(self):
        parts = []
        for f, v, A, B in self.items():
            c = ",".join(str(x) for x in f.coords)
            parts.append(f"({A:.6g}cos + {B:.6g}sin)@[{c}]")
        return "TrigPoly(" + " + ".join(parts) + ")" if parts else "TrigPoly(0)"


def multiply(p: TrigPoly, q: TrigPoly) -> TrigPoly:
    """Product by product-to-sum identities; frequency arithmetic is exact."""
    p._check_basis(q)
    store: dict = {}
    for f1, (A1, B1) in p.terms.items():
        for f2, (A2, B2) in q.terms.items():
            _accumulate(store, f1 + f2, 0.5 * (A1 * A2 - B1 * B2), 0.5 * (B1 * A2 + A1 * B2))
            _accumulate(store, f1 - f2, 0.5 * (A1 * A2 + B1 * B2), 0.5 * (B1 * A2 - A1 * B2))
    return TrigPoly(p.basis, store)


def module_compare(p: TrigPoly, q: TrigPoly) -> str:
    """Compare the frequency modules of ``p`` and ``q`` as integer lattices.

    Returns ``"Equal"``, ``"PSubsetOfQ"``, ``"QSubsetOfP"`` or ``"Incomparable"``.
    """
    p._check_basis(q)
    return compare_lattices(p.module_generators(), q.module_generators())


def evaluate(p: TrigPoly, t):
    return p.evaluate(t)


def reflect(p: TrigPoly) -> TrigPoly:
    return p.reflect()
