import math

import numpy as np
import pytest

from reflectap import (
    EquationParams,
    MaxIterations,
    Monomial,
    NonContractive,
    Nonlinearity,
    PicardConfig,
    RadiusExceeded,
    TrigPoly,
    UnsupportedCase,
    bounded_solution,
    contraction_check,
    lipschitz_bound,
    picard_solve,
    residual_grid,
    sample,
)
from reflectap.grid import GridFunction

P = EquationParams(-3, 1)


def test_lipschitz_examples(one):
    g = TrigPoly.cos(one, (1,))
    assert lipschitz_bound(Nonlinearity(g, (Monomial(0.1, 1, 0),), radius=7.0)) == pytest.approx(0.1)
    assert lipschitz_bound(Nonlinearity(g)) == 0.0
    assert lipschitz_bound(Nonlinearity(g, (Monomial(0.05, 1, 1),), radius=1.0)) <= 0.1


@pytest.mark.parametrize(
    "monos,R",
    [
        ((Monomial(0.05, 1, 1),), 1.0),
        ((Monomial(-0.3, 3, 0), Monomial(0.2, 0, 2)), 0.8),
        ((Monomial(1.0, 2, 3),), 0.5),
    ],
)
def test_lipschitz_bound_dominates_difference_quotients(one, monos, R):
    nl = Nonlinearity(TrigPoly.zero(one), monos, R)
    L = lipschitz_bound(nl)
    rng = np.random.default_rng(3)
    x1, y1, x2, y2 = rng.uniform(-R, R, size=(4, 20000))

    def f(x, y):
        return sum(m.c * x**m.p * y**m.q for m in monos)

    quot = np.abs(f(x1, y1) - f(x2, y2)) / (np.abs(x1 - x2) + np.abs(y1 - y2))
    assert np.max(quot) <= L * (1 + 1e-12)


def test_contraction_check_examples():
    c = contraction_check(EquationParams(-5, -1), 0.0)  # alpha = 2, beta = sqrt(6)
    assert c.paper_threshold == pytest.approx(1 / 6)
    c = contraction_check(P, 0.1)
    assert c.paper_threshold == pytest.approx(1 / 6)
    assert c.derived_threshold == pytest.approx(2 / 3)
    assert c.paper_ok and c.derived_ok and c.governing == "derived"
    z = contraction_check(P, 0.0)
    assert z.paper_ok and z.derived_ok
    with pytest.raises(UnsupportedCase):
        contraction_check(EquationParams(4, 2), 0.1)


def _interior(x):
    m = x.interior_mask()
    return x.t[m], x.samples[m]


def test_picard_linear_shift(one):
    nl = Nonlinearity(TrigPoly.cos(one, (1,)), (Monomial(0.1, 1, 0),))
    x, rep = picard_solve(P, nl)
    t, v = _interior(x)
    assert np.max(np.abs(v + np.cos(t) / 3.1)) <= 1e-4
    # shifted-linear oracle through the spectral route: x'' - 3.1 x + x(-t) = cos t
    xs = bounded_solution(EquationParams(-3.1, 1), TrigPoly.cos(one, (1,)))
    assert np.max(np.abs(v - xs(t))) <= 1e-4
    assert rep.measured_rate <= rep.governing_rate + 0.05
    assert rep.residual <= 1e-4 and rep.residual_ok


def test_picard_constant_map(one):
    nl = Nonlinearity(TrigPoly.cos(one, (1,)))
    x, rep = picard_solve(P, nl)
    assert rep.iterations == 2 and rep.increments[1] == 0.0
    t, v = _interior(x)
    assert np.max(np.abs(v + np.cos(t) / 3)) <= 1e-5


def test_picard_bilinear_and_uniqueness(one):
    nl = Nonlinearity(TrigPoly.cos(one, (1,)), (Monomial(0.05, 1, 1),), radius=1.0)
    cfg = PicardConfig()
    x, rep = picard_solve(P, nl, cfg)
    assert rep.measured_rate <= rep.contraction.derived_rate
    y, _ = picard_solve(P, nl, cfg, start=TrigPoly.cos(one, (1,), 0.5))
    m = x.interior_mask()
    assert np.max(np.abs(x.samples[m] - y.samples[m])) <= 2 * cfg.tol
    forcing = sample(nl.forcing, cfg.T, cfg.h).samples
    g_eff = GridFunction(cfg.T, cfg.h, nl.apply(forcing, np.asarray(x.samples)), interior=x.interior)
    assert residual_grid(P, x, g_eff) <= max(10 * cfg.tol, rep.residual_floor)


def test_picard_harmonic_solution(one):
    # h divides 2 pi so that a one-period shift lands on nodes; the truncation
    # floor tail_cut must sit below tol for a 2*tol comparison to be meaningful
    h = 2 * math.pi / 400
    cfg = PicardConfig(T=8 * 2 * math.pi, h=h, tail_cut=1e-12)
    nl = Nonlinearity(TrigPoly.cos(one, (1,)) + TrigPoly.sin(one, (2,), 0.3), (Monomial(0.05, 1, 1), Monomial(-0.02, 3, 0)))
    x, _ = picard_solve(P, nl, cfg)
    m = np.abs(x.t) <= x.interior
    idx = np.nonzero(m)[0]
    idx = idx[idx + 400 < x.samples.size]
    idx = idx[m[idx + 400]]
    assert idx.size > 1000
    assert np.max(np.abs(x.samples[idx + 400] - x.samples[idx])) <= 2 * cfg.tol


def test_picard_errors(one):
    g = TrigPoly.cos(one, (1,))
    with pytest.raises(NonContractive):
        picard_solve(P, Nonlinearity(g, (Monomial(1.0, 1, 0),)))
    with pytest.raises(RadiusExceeded):
        picard_solve(P, Nonlinearity(g.scale(30.0), (Monomial(0.01, 2, 0),), radius=1.0))
    with pytest.raises(MaxIterations):
        picard_solve(P, Nonlinearity(g, (Monomial(0.3, 1, 0),)), PicardConfig(max_iter=2))
    with pytest.raises(UnsupportedCase):
        picard_solve(EquationParams(4, 2), Nonlinearity(g))


def test_config_validation():
    with pytest.raises(ValueError):
        PicardConfig(tol=0)
    with pytest.raises(ValueError):
        PicardConfig(max_iter=0)
    with pytest.raises(ValueError):
        Monomial(1.0, 0, 0)
