"""Problem files: a flat sectioned text format.

::

    # comment
    [equation]
    a = -3
    b = 1
    [basis]
    generators = 1.0, 1.4142135623730951
    [forcing]
    term = 1, 0 @ 1, 0        # A cos + B sin at coordinates (1, 0)
    [nonlinearity]
    mono = 0.1, 1, 0          # c * x(t)^p * x(-t)^q
    radius = 1
    [solver]
    mode = picard             # spectral | grid | picard
    T = 40
    h = 0.005
    tol = 1e-10
    max_iter = 200
    resonance_tol = 1e-9
    [ivp]
    x0 = 0.5
    xdot0 = 0

Numbers are decimals or rationals ``p/q``. ``term`` and ``mono`` repeat;
every other key appears at most once. Unknown sections and keys are errors.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidParams, ParseError, SemanticError
from .grid import DEFAULT_H, grid_size
from .nonlinear import Monomial, Nonlinearity
from .spectral import DEFAULT_RESONANCE_TOL, EquationParams, Oscillatory, classify
from .errors import InvalidGrid
from .trigpoly import FrequencyBasis, TrigPoly

MODES = ("spectral", "grid", "picard")

_SECTIONS = {
    "equation": {"a", "b"},
    "basis": {"generators"},
    "forcing": {"term"},
    "nonlinearity": {"mono", "radius"},
    "solver": {"mode", "T", "h", "tol", "max_iter", "resonance_tol"},
    "ivp": {"x0", "xdot0"},
}
_REPEATABLE = {("forcing", "term"), ("nonlinearity", "mono")}

_NUM = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_RAT = re.compile(r"^[+-]?\d+\s*/\s*\d+$")
_INT = re.compile(r"^[+-]?\d+$")


@dataclass(frozen=True)
class SolverSettings:
    mode: str = "spectral"
    T: float = 40.0
    h: float = DEFAULT_H
    tol: float = 1e-10
    max_iter: int = 200
    resonance_tol: float = DEFAULT_RESONANCE_TOL


@dataclass(frozen=True, eq=True)
class ProblemSpec:
    params: EquationParams
    basis: FrequencyBasis
    forcing: TrigPoly
    nonlinearity: Nonlinearity | None = None
    solver: SolverSettings = field(default_factory=SolverSettings)
    ivp: tuple[float, float] | None = None


def _exact(tok: str, line: int, col: int) -> Fraction:
    s = tok.strip()
    if _RAT.match(s):
        p, q = s.split("/")
        if int(q) == 0:
            raise ParseError(f"zero denominator in {s!r}", line, col)
        return Fraction(int(p), int(q))
    if _NUM.match(s):
        return Fraction(s)
    raise ParseError(f"not a number: {s!r}", line, col)


def _real(tok: str, line: int, col: int) -> float:
    s = tok.strip()
    if _RAT.match(s):
        return float(_exact(s, line, col))
    if _NUM.match(s):
        return float(s)
    raise ParseError(f"not a number: {s!r}", line, col)


def _int(tok: str, line: int, col: int) -> int:
    s = tok.strip()
    if not _INT.match(s):
        raise ParseError(f"not an integer: {s!r}", line, col)
    return int(s)


def _split(value: str, start_col: int):
    """Comma-separated fields with their 1-based columns."""
    out = []
    pos = 0
    for part in value.split(","):
        lead = len(part) - len(part.lstrip())
        out.append((part.strip(), start_col + pos + lead))
        pos += len(part) + 1
    return out


def parse_problem(text: str) -> ProblemSpec:
    """Parse problem-file text.

    Raises
    ------
    ParseError
        Syntax problems, with line and column.
    SemanticError
        Well-formed input that violates a constraint (e.g. ``b = 0``).
    """
    section = None
    seen_sections = set()
    seen_keys = set()
    raw: dict[tuple[str, str], list] = {}

    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        stripped = body.strip()
        col0 = len(body) - len(body.lstrip()) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ParseError("unterminated section header", lineno, col0)
            name = stripped[1:-1].strip()
            if name not in _SECTIONS:
                raise ParseError(f"unknown section [{name}]", lineno, col0)
            if name in seen_sections:
                raise ParseError(f"duplicate section [{name}]", lineno, col0)
            seen_sections.add(name)
            section = name
            continue
        if "=" not in body:
            raise ParseError("expected 'key = value'", lineno, col0)
        if section is None:
            raise ParseError("key outside of any section", lineno, col0)
        key_part, value = body.split("=", 1)
        key = key_part.strip()
        if key not in _SECTIONS[section]:
            raise ParseError(f"unknown key {key!r} in [{section}]", lineno, col0)
        if (section, key) not in _REPEATABLE and (section, key) in seen_keys:
            raise ParseError(f"duplicate key {key!r} in [{section}]", lineno, col0)
        seen_keys.add((section, key))
        vcol = len(key_part) + 2 + (len(value) - len(value.lstrip()))
        raw.setdefault((section, key), []).append((value.strip(), lineno, vcol))

    def one(sec, key, conv, default=None):
        if (sec, key) not in raw:
            return default
        v, ln, c = raw[(sec, key)][0]
        if not v:
            raise ParseError(f"empty value for {key!r}", ln, c)
        return conv(v, ln, c)

    if ("equation", "a") not in raw or ("equation", "b") not in raw:
        raise SemanticError("[equation] must define both a and b")
    a = one("equation", "a", _real)
    b = one("equation", "b", _real)
    if b == 0.0:
        raise SemanticError("b must be nonzero")
    try:
        params = EquationParams(a, b)
    except InvalidParams as exc:
        raise SemanticError(str(exc)) from None

    if ("basis", "generators") not in raw:
        raise SemanticError("[basis] must define generators")
    gv, gl, gc = raw[("basis", "generators")][0]
    gens = [_real(tok, gl, c) for tok, c in _split(gv, gc)]
    try:
        basis = FrequencyBasis(tuple(gens))
    except ValueError as exc:
        raise SemanticError(f"basis: {exc}") from None

    terms = []
    for v, ln, c in raw.get(("forcing", "term"), []):
        if v.count("@") != 1:
            raise ParseError("term must look like 'A, B @ r1, r2, ...'", ln, c)
        left, right = v.split("@")
        coefs = _split(left, c)
        if len(coefs) != 2:
            raise ParseError(f"term needs exactly 2 coefficients, got {len(coefs)}", ln, c)
        A = _real(coefs[0][0], ln, coefs[0][1])
        B = _real(coefs[1][0], ln, coefs[1][1])
        rc = c + len(left) + 1
        coords = _split(right, rc)
        if len(coords) != len(basis):
            raise ParseError(f"term has {len(coords)} coordinates but the basis has {len(basis)} generators", ln, rc)
        terms.append((tuple(_exact(tok, ln, cc) for tok, cc in coords), A, B))
    forcing = TrigPoly.from_terms(basis, terms)

    mode = one("solver", "mode", lambda v, ln, c: v, "spectral")
    if mode not in MODES:
        raise SemanticError(f"mode must be one of {', '.join(MODES)}, got {mode!r}")
    settings = SolverSettings(
        mode=mode,
        T=one("solver", "T", _real, SolverSettings.T),
        h=one("solver", "h", _real, SolverSettings.h),
        tol=one("solver", "tol", _real, SolverSettings.tol),
        max_iter=one("solver", "max_iter", _int, SolverSettings.max_iter),
        resonance_tol=one("solver", "resonance_tol", _real, SolverSettings.resonance_tol),
    )
    if settings.T <= 0:
        raise SemanticError("T must be positive")
    if settings.h <= 0:
        raise SemanticError("h must be positive")
    try:
        grid_size(settings.T, settings.h)
    except InvalidGrid:
        raise SemanticError("T / h must be an integer") from None
    if settings.tol <= 0:
        raise SemanticError("tol must be positive")
    if settings.max_iter < 1:
        raise SemanticError("max_iter must be at least 1")
    if settings.resonance_tol <= 0:
        raise SemanticError("resonance_tol must be positive")

    nonlinearity = None
    if "nonlinearity" in seen_sections:
        monos = []
        for v, ln, c in raw.get(("nonlinearity", "mono"), []):
            parts = _split(v, c)
            if len(parts) != 3:
                raise ParseError(f"mono needs 'c, p, q', got {len(parts)} fields", ln, c)
            coef = _real(parts[0][0], ln, parts[0][1])
            p = _int(parts[1][0], ln, parts[1][1])
            q = _int(parts[2][0], ln, parts[2][1])
            if p < 0 or q < 0 or p + q < 1:
                raise SemanticError(f"line {ln}: monomial exponents must be >= 0 with p + q >= 1")
            monos.append(Monomial(coef, p, q))
        radius = one("nonlinearity", "radius", _real, 1.0)
        if radius <= 0:
            raise SemanticError("radius must be positive")
        nonlinearity = Nonlinearity(forcing, tuple(monos), radius)
    if mode == "picard" and nonlinearity is None:
        raise SemanticError("mode = picard requires a [nonlinearity] section")
    if nonlinearity is not None and mode != "picard":
        raise SemanticError("a [nonlinearity] section requires mode = picard")

    ivp = None
    if "ivp" in seen_sections:
        if ("ivp", "x0") not in raw or ("ivp", "xdot0") not in raw:
            raise SemanticError("[ivp] must define both x0 and xdot0")
        ivp = (one("ivp", "x0", _real), one("ivp", "xdot0", _real))
        if not isinstance(classify(params), Oscillatory):
            raise SemanticError("[ivp] is allowed only in the Oscillatory regime (-a < b < a)")
        if mode != "spectral":
            raise SemanticError("[ivp] requires mode = spectral")

    return ProblemSpec(params, basis, forcing, nonlinearity, settings, ivp)


def _num(x: float) -> str:
    return repr(float(x))


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def emit_forcing(p: TrigPoly) -> str:
    return "".join(
        f"term = {_num(A)}, {_num(B)} @ {', '.join(_frac(c) for c in f.coords)}\n" for f, _, A, B in p.items()
    )


def forcing_digest(p: TrigPoly) -> str:
    """Short stable hash of a forcing, used in findings records."""
    basis = ", ".join(_num(g) for g in p.basis.generators)
    return hashlib.sha256((basis + "\n" + emit_forcing(p)).encode()).hexdigest()[:16]


def emit_problem(spec: ProblemSpec) -> str:
    s = spec.solver
    out = [
        "[equation]\n",
        f"a = {_num(spec.params.a)}\n",
        f"b = {_num(spec.params.b)}\n",
        "[basis]\n",
        f"generators = {', '.join(_num(g) for g in spec.basis.generators)}\n",
        "[forcing]\n",
        emit_forcing(spec.forcing),
    ]
    if spec.nonlinearity is not None:
        out.append("[nonlinearity]\n")
        out.extend(f"mono = {_num(m.c)}, {m.p}, {m.q}\n" for m in spec.nonlinearity.monomials)
        out.append(f"radius = {_num(spec.nonlinearity.radius)}\n")
    out += [
        "[solver]\n",
        f"mode = {s.mode}\n",
        f"T = {_num(s.T)}\n",
        f"h = {_num(s.h)}\n",
        f"tol = {_num(s.tol)}\n",
        f"max_iter = {s.max_iter}\n",
        f"resonance_tol = {_num(s.resonance_tol)}\n",
    ]
    if spec.ivp is not None:
        out += ["[ivp]\n", f"x0 = {_num(spec.ivp[0])}\n", f"xdot0 = {_num(spec.ivp[1])}\n"]
    return "".join(out)
