import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reflectap import (
    EquationParams,
    FrequencyBasis,
    HomogeneousPart,
    InvalidParams,
    Resonance,
    TrigPoly,
    UnsupportedCase,
    bounded_solution,
    case1_homogeneous,
    case2_ivp,
    classify,
    harmonic_response,
    margins,
    module_compare,
)
from reflectap.spectral import Degenerate, Hyperbolic, Mixed, Oscillatory, grows_without_bound

R2, R3, R6 = math.sqrt(2), math.sqrt(3), math.sqrt(6)
TS = np.linspace(-6.0, 6.0, 97)


def fd_residual(a, b, x, g, t, h=1e-3):
    """Residual from a 5-point second difference of callables; no library calculus."""
    d2 = (-x(t + 2 * h) + 16 * x(t + h) - 30 * x(t) + 16 * x(t - h) - x(t - 2 * h)) / (12 * h * h)
    return np.max(np.abs(d2 + a * x(t) + b * x(-t) - g(t)))


def test_classify_examples():
    s = classify(EquationParams(-3, 1))
    assert isinstance(s, Hyperbolic) and s.alpha == 2.0 and s.beta == pytest.approx(R2, abs=1e-15)
    s = classify(EquationParams(4, 2))
    assert isinstance(s, Oscillatory) and s.mu == pytest.approx(R2, abs=1e-15) and s.nu == pytest.approx(R6, abs=1e-15)
    assert isinstance(classify(EquationParams(1, 1)), Degenerate)
    assert isinstance(classify(EquationParams(-1, 1)), Degenerate)
    m = classify(EquationParams(1, 3))
    assert isinstance(m, Mixed) and m.real_rate == pytest.approx(R2) and m.imag_rate == 2.0


def test_b_zero_rejected():
    with pytest.raises(InvalidParams):
        EquationParams(1.0, 0.0)


def test_harmonic_response_examples():
    r = harmonic_response(EquationParams(-3, 1), 1.0)
    assert r.p_coeff == pytest.approx(-4 / 15, abs=1e-16) and r.q_coeff == pytest.approx(-1 / 15, abs=1e-16)
    assert r.cos_gain == pytest.approx(-1 / 3, abs=1e-16)
    with pytest.raises(Resonance):
        harmonic_response(EquationParams(2, 1), 1.0)
    r = harmonic_response(EquationParams(4, 2), 2.0)
    assert r.cos_gain == pytest.approx(0.5, abs=1e-16)
    # x = cos(2t)/2 in x'' + 4x + 2x(-t): -2 + 2 + 1 = 1 times cos(2t)
    x = lambda t: 0.5 * np.cos(2 * t)
    assert fd_residual(4, 2, x, lambda t: np.cos(2 * t), TS) < 1e-9


@settings(max_examples=200, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5).filter(lambda b: abs(b) > 1e-3), st.floats(0, 4))
def test_harmonic_response_solves_its_2x2_system(a, b, lam):
    p = EquationParams(a, b)
    try:
        r = harmonic_response(p, lam)
    except Resonance:
        c = a - lam * lam
        assert abs(c * c - b * b) <= 1e-9 * max(1, c * c, b * b)
        return
    c = a - lam * lam
    scale = max(1.0, abs(c * r.p_coeff), abs(b * r.q_coeff))
    assert abs(c * r.p_coeff + b * r.q_coeff - 1) <= 1e-13 * scale
    assert abs(b * r.p_coeff + c * r.q_coeff) <= 1e-13 * scale


def test_resonance_consistency_case2():
    p = EquationParams(4, 2)
    s = classify(p)
    for lam in (s.mu, s.nu):
        with pytest.raises(Resonance):
            harmonic_response(p, lam)
    for lam in (0.0, 1.0, 2.0, 3.0):
        harmonic_response(p, lam)


def test_bounded_solution_examples(one):
    x = bounded_solution(EquationParams(-3, 1), TrigPoly.cos(one, (1,)))
    assert x.max_coefficient_difference(TrigPoly.cos(one, (1,), -1 / 3)) < 1e-16
    assert fd_residual(-3, 1, x.evaluate, np.cos, TS) < 1e-9
    x = bounded_solution(EquationParams(4, 2), TrigPoly.cos(one, (2,)))
    assert x.max_coefficient_difference(TrigPoly.cos(one, (2,), 0.5)) < 1e-16
    assert bounded_solution(EquationParams(-3, 1), TrigPoly.zero(one)).is_zero()


def test_bounded_solution_example2_is_not_resonant(one):
    # theorem margin is 0 but only a sine term at mu = 1 would resonate
    x = bounded_solution(EquationParams(2, 1), TrigPoly.cos(one, (1,)))
    assert x == TrigPoly.cos(one, (1,), 0.5)
    with pytest.raises(Resonance):
        bounded_solution(EquationParams(2, 1), TrigPoly.sin(one, (1,)))


def test_unsupported_regimes(one):
    g = TrigPoly.cos(one, (1,))
    for p in (EquationParams(1, 1), EquationParams(1, 3)):
        with pytest.raises(UnsupportedCase):
            bounded_solution(p, g)


def test_constant_forcing_case1(one):
    # x = -1/beta^2 for the constant 1 with beta^2 = -a-b = 2
    x = bounded_solution(EquationParams(-3, 1), TrigPoly.constant(one, 1.0))
    assert x == TrigPoly.constant(one, -0.5)


def test_case1_homogeneous_examples():
    p = EquationParams(-3, 1)
    assert case1_homogeneous(p, HomogeneousPart(0, 0), 3.7) == 0.0
    assert case1_homogeneous(p, HomogeneousPart(1, 0), 1.0) == pytest.approx(math.exp(2) - math.exp(-2), rel=1e-15)
    ts = np.array([1.25, 2.5, 5.0, 10.0])
    assert grows_without_bound(case1_homogeneous(p, HomogeneousPart(0, 1), ts))
    assert not grows_without_bound(case1_homogeneous(p, HomogeneousPart(0, 0), ts))
    with pytest.raises(UnsupportedCase):
        case1_homogeneous(EquationParams(4, 2), HomogeneousPart(1, 1), 0.0)


def test_case1_homogeneous_solves_equation():
    p = EquationParams(-3, 1)
    h = lambda t: case1_homogeneous(p, HomogeneousPart(0.3, -0.7), t)
    assert fd_residual(-3, 1, h, lambda t: 0 * t, np.linspace(-2, 2, 21)) < 1e-7


def test_margins_examples(one):
    m = margins(EquationParams(2, 1), TrigPoly.cos(one, (1,)))
    assert m.theorem_margin_mu == 0.0
    assert not m.theorem_hypothesis_holds
    assert m.sharp_margin_even == pytest.approx(R3 - 1, abs=1e-15)
    assert m.sharp_margin_odd == math.inf
    m = margins(EquationParams(4, 2), TrigPoly.cos(one, (2,)))
    assert m.theorem_margin_mu == pytest.approx(2 - R2, abs=1e-15)
    assert m.theorem_margin_nu == pytest.approx(R6 - 2, abs=1e-15)
    with pytest.raises(UnsupportedCase):
        margins(EquationParams(-3, 1), TrigPoly.cos(one, (1,)))


def test_near_resonance_warning(one):
    p = EquationParams(4, 2)
    g = TrigPoly.from_terms(FrequencyBasis((R6 - 1e-4,)), [((1,), 1.0, 0.0)])
    assert margins(p, g).near_resonance
    x = bounded_solution(p, g)
    assert abs(x.coefficient_sum()) > 1e3


def test_case2_ivp_examples(one):
    p = EquationParams(4, 2)
    sol = case2_ivp(p, TrigPoly.cos(one, (2,)), 0.5, 0.0)
    assert sol.sin_mu == 0.0 and sol.cos_nu == 0.0
    sol = case2_ivp(p, TrigPoly.zero(one), 1.0, 0.0)
    np.testing.assert_allclose(sol(TS), np.cos(R6 * TS), atol=1e-15)
    assert fd_residual(4, 2, lambda t: np.cos(R6 * t), lambda t: 0 * t, TS) < 1e-7
    sol = case2_ivp(p, TrigPoly.zero(one), 0.0, R2)
    np.testing.assert_allclose(sol(TS), np.sin(R2 * TS), atol=1e-14)
    assert fd_residual(4, 2, lambda t: np.sin(R2 * t), lambda t: 0 * t, TS) < 1e-7


def test_case2_ivp_hits_initial_conditions(sqrt2):
    p = EquationParams(3, -0.5)
    g = TrigPoly.from_terms(sqrt2, [((1, 0), 0.4, -0.2), ((0, 1), 0.1, 0.3)])
    sol = case2_ivp(p, g, 0.7, -1.3)
    assert abs(sol(0.0) - 0.7) <= 1e-12
    assert abs(sol.evaluate(0.0, 1) + 1.3) <= 1e-12
    assert fd_residual(3, -0.5, sol.evaluate, g.evaluate, TS) < 1e-7
    with pytest.raises(UnsupportedCase):
        case2_ivp(EquationParams(-3, 1), g, 0, 0)


# invariants

coef = st.floats(-2, 2, allow_nan=False)
terms = st.lists(st.tuples(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), coef, coef), min_size=1, max_size=5)
params_st = st.sampled_from([EquationParams(-3, 1), EquationParams(-5, -2), EquationParams(4, 2), EquationParams(7, -1.3)])


def _safe(p, g):
    try:
        return bounded_solution(p, g)
    except Resonance:
        return None


@settings(max_examples=100, deadline=None)
@given(params_st, terms)
def test_parity_decoupling(p, ts):
    basis = FrequencyBasis((1.0, R2))
    g = TrigPoly.from_terms(basis, ts)
    ge, go = g.parity_split()
    for part, keep in ((ge, 0), (go, 1)):
        x = _safe(p, part)
        if x is None:
            continue
        assert all(ab[1 - keep] == 0.0 for ab in x.terms.values())


@settings(max_examples=100, deadline=None)
@given(params_st, terms, terms)
def test_superposition(p, t1, t2):
    basis = FrequencyBasis((1.0, R2))
    g1, g2 = TrigPoly.from_terms(basis, t1), TrigPoly.from_terms(basis, t2)
    x1, x2, x12 = _safe(p, g1), _safe(p, g2), _safe(p, g1 + g2)
    if None in (x1, x2, x12):
        return
    assert x12.max_coefficient_difference(x1 + x2) <= 1e-12 * max(1.0, x12.coefficient_sum())


@settings(max_examples=100, deadline=None)
@given(params_st, terms)
def test_solution_module_within_forcing_module(p, ts):
    g = TrigPoly.from_terms(FrequencyBasis((1.0, R2)), ts)
    x = _safe(p, g)
    if x is None:
        return
    assert module_compare(x, g) in ("Equal", "PSubsetOfQ")
    # every stored forcing term has a nonzero response, so no frequency is lost
    if len(x) == len(g):
        assert module_compare(x, g) == "Equal"


def test_periodic_forcing_gives_harmonic_solution(one):
    # frequencies 1/3, 2/3, 4/3 are multiples of 1/3, so the response is 6 pi periodic
    g = TrigPoly.from_terms(one, [(("1/3",), 1.0, 0.5), (("2/3",), -0.2, 0.0), (("4/3",), 0.0, 0.7)])
    x = bounded_solution(EquationParams(-3, 1), g)
    assert all((f.coords[0] * 3).denominator == 1 for f in x.terms)
    np.testing.assert_allclose(x(TS + 6 * math.pi), x(TS), atol=1e-13)


def test_case1_derived_bound_on_examples(sqrt2):
    rng = np.random.default_rng(5)
    for _ in range(50):
        al, be = rng.uniform(0.3, 3, 2)
        p = EquationParams(-(al**2 + be**2) / 2, (al**2 - be**2) / 2)
        g = TrigPoly.from_terms(sqrt2, [(tuple(rng.integers(-2, 3, 2)), *rng.uniform(-1, 1, 2))])
        x = bounded_solution(p, g)
        # single harmonic: sup is the amplitude on both sides
        assert x.coefficient_sum() <= (1 / al**2 + 1 / be**2) * g.coefficient_sum() * (1 + 1e-12)
