import numpy as np
import pytest

from darboux_osc import families as fam
from darboux_osc.errors import DivisionBySingularAlpha, SingularDenominator
from darboux_osc.factorize import (CoefficientPair, FactorSolution, RiccatiSeed,
                                   alpha_numeric, bernoulli_residual, constant,
                                   partner_coefficients, radicand_crossings,
                                   reconstruct_fg, riccati_residual, undamped_condition)
from darboux_osc.funcs import SampledField, make_grid, sample

W0 = 3.5
ZERO = constant(0.0)


def tan_seed(w=W0):
    return RiccatiSeed(lambda t: w * np.tan(w * t), lambda t: w ** 2 / np.cos(w * t) ** 2)


def harmonic(w=W0):
    return CoefficientPair(ZERO, constant(w ** 2))


def const_alpha(value, h, grid):
    a = SampledField(grid, np.full(grid.n, value, dtype=complex))
    return FactorSolution.from_alpha(a, sample(h, grid))


@pytest.mark.parametrize("seed,coeffs,t", [
    (tan_seed(), harmonic(), 0.1),
    (RiccatiSeed(lambda t: -np.tanh(t), lambda t: -1 / np.cosh(t) ** 2),
     CoefficientPair(ZERO, constant(-1.0)), 2.0),
    (RiccatiSeed(ZERO, ZERO), CoefficientPair(ZERO, ZERO), 0.7),
])
def test_riccati_seeds(seed, coeffs, t):
    assert abs(riccati_residual(seed, coeffs, t)) < 1e-12


def test_riccati_wrong_seed_is_nonzero():
    seed = RiccatiSeed(lambda t: np.tan(t), lambda t: 1 / np.cos(t) ** 2)
    assert abs(riccati_residual(seed, harmonic(), 0.3)) > 1


def test_riccati_batch_survives_pole():
    t = np.array([0.1, np.pi / 2 / W0, 0.3])
    seed = RiccatiSeed(lambda t: W0 * np.tan(W0 * t) * np.where(t == t[1], np.inf, 1),
                       tan_seed().h_prime)
    res = riccati_residual(seed, harmonic(), t)
    assert np.isnan(res[1])
    assert np.all(np.abs(res[[0, 2]]) < 1e-12)


def test_alpha_trig_matches_closed_form():
    g = make_grid(0.0, 0.4, 4001)
    sol = alpha_numeric(harmonic(), tan_seed(), 1.0, g)
    c = np.cos(W0 * g.samples)
    assert np.max(np.abs(sol.alpha.values - c / np.sqrt(2 - c ** 2))) < 1e-6


def test_alpha_hyp_is_imaginary():
    g = make_grid(0.0, 3.0, 4001)
    seed = RiccatiSeed(lambda t: -np.tanh(t), lambda t: -1 / np.cosh(t) ** 2)
    sol = alpha_numeric(CoefficientPair(ZERO, constant(-1.0)), seed, -0.5, g)
    ch = np.cosh(g.samples)
    exact = ch / np.sqrt(0.5 - ch ** 2 + 0j)
    assert np.max(np.abs(sol.alpha.values - exact)) < 1e-6
    # principal root of a negative radicand is +i|r|**0.5, so alpha = -i|alpha|
    assert np.all(sol.alpha.values.imag < 0)
    assert np.max(np.abs(sol.alpha.values.real)) < 1e-6


@pytest.mark.parametrize("lam", [4.0, 0.25, -1.0, 2j])
def test_alpha_zero_seed_is_constant(lam):
    g = make_grid(0.0, 1.0, 11)
    sol = alpha_numeric(CoefficientPair(ZERO, ZERO), RiccatiSeed(ZERO, ZERO), lam, g)
    assert np.allclose(sol.alpha.values, lam ** -0.5, atol=1e-15)


def test_beta_is_h_alpha():
    g = make_grid(0.0, 0.4, 401)
    sol = alpha_numeric(harmonic(), tan_seed(), 1.0, g)
    assert np.array_equal(sol.beta.values, (sample(tan_seed().h, g) * sol.alpha).values)


def test_singular_radicand_lists_crossings():
    # radicand -0.5 + sin^2(w t) vanishes at w t = pi/4
    g = make_grid(0.0, 0.4, 4001)
    with pytest.raises(SingularDenominator) as info:
        alpha_numeric(harmonic(), tan_seed(), -0.5, g)
    assert len(info.value.times) == 1
    assert info.value.times[0] == pytest.approx(np.pi / 4 / W0, abs=1e-7)


def test_crossings_ignore_complex_radicand():
    g = make_grid(0, 1, 11)
    r = SampledField(g, np.linspace(-1, 1, 11) + 0.5j)
    assert radicand_crossings(r) == []


def test_partner_trig_damping():
    g = make_grid(0.0, 0.4, 4001)
    sol = alpha_numeric(harmonic(), tan_seed(), 1.0, g)
    pc = partner_coefficients(harmonic(), sol)
    p = fam.FamilyParams.trig(W0, 2.0)
    F = 2 * W0 * fam.trig_damping_ratio(p, g.samples)
    inner = np.abs(F) > 1e-3
    rel = np.abs(pc.F.values - F)[inner] / np.abs(F[inner])
    assert np.max(rel) < 1e-4


def test_unit_alpha_gives_same_equation():
    g = make_grid(0.0, 0.4, 401)
    sol = const_alpha(1.0, tan_seed().h, g)
    pc = partner_coefficients(harmonic(), sol)
    assert np.max(np.abs(pc.F.values)) == 0
    assert np.max(np.abs(pc.G.values - W0 ** 2)) == 0


@pytest.mark.parametrize("unit", [1j, -1j])
def test_imaginary_alpha_undamped_singular(unit):
    g = make_grid(0.0, 0.4, 4001)
    sol = const_alpha(unit, tan_seed().h, g)
    pc = partner_coefficients(harmonic(), sol)
    assert np.max(np.abs(pc.F.values)) == 0
    # G = g - 2h' = -w0^2 (2 tan^2 + 1)
    expected = -W0 ** 2 * (2 * np.tan(W0 * g.samples) ** 2 + 1)
    assert np.max(np.abs(pc.G.values - expected) / np.abs(expected)) < 1e-4


def test_zero_alpha_raises():
    g = make_grid(0.0, 1.0, 5)
    sol = const_alpha(0.0, ZERO, g)
    with pytest.raises(DivisionBySingularAlpha):
        partner_coefficients(harmonic(), sol)
    with pytest.raises(DivisionBySingularAlpha):
        reconstruct_fg(sol)


@pytest.mark.parametrize("p,t1,g_value", [
    (fam.FamilyParams.trig(3.5, 2.0), 0.4, 12.25),
    (fam.FamilyParams.hyp(1.0, 0.5), 2.0, -1.0),
])
def test_round_trip(p, t1, g_value):
    grid = make_grid(0.0, t1, 4001)
    sol = alpha_numeric(fam.coefficients(p), fam.seed(p), fam.numeric_lambda(p), grid)
    back = reconstruct_fg(sol)
    assert np.max(np.abs(back.f.values)) < 1e-4
    assert np.max(np.abs(back.g.values - g_value)) < 1e-4


def test_round_trip_free_particle():
    sol = const_alpha(1.0, ZERO, make_grid(0, 1, 11))
    back = reconstruct_fg(sol)
    assert np.all(back.f.values == 0) and np.all(back.g.values == 0)


@pytest.mark.parametrize("p,t", [
    (fam.FamilyParams.trig(3.5, 2.0), 0.1),
    (fam.FamilyParams.hyp(1.0, 0.5), 1.0),
])
def test_bernoulli_closed_form(p, t):
    sol = fam.closed_factor_solution(p, make_grid(0.0, 2 * t, 3))
    assert abs(bernoulli_residual(sol, fam.seed(p), fam.coefficients(p), t)) < 1e-9


def test_bernoulli_constant_alpha():
    sol = const_alpha(0.5, ZERO, make_grid(0, 1, 11))
    res = bernoulli_residual(sol, RiccatiSeed(ZERO, ZERO), CoefficientPair(ZERO, ZERO), 0.5)
    assert res == 0


def test_undamped_condition():
    p = fam.FamilyParams.trig(3.5, 2.0)
    grid = make_grid(0.0, 0.4, 401)
    sol = fam.closed_factor_solution(p, grid)
    assert undamped_condition(fam.coefficients(p), sol, 0.0)
    assert not undamped_condition(fam.coefficients(p), sol, 0.2)
    flat = const_alpha(2.0, ZERO, grid)
    assert all(undamped_condition(harmonic(), flat, t) for t in grid.samples[::50])
