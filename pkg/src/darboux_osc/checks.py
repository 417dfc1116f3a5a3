"""Named invariant checks grouped into suites for ``darboux-osc verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import families as fam
from .factorize import alpha_numeric, bernoulli_residual, reconstruct_fg, riccati_residual
from .families import FamilyParams, SuperpositionConstants
from .funcs import cumulative_integral, make_grid, sample
from .verify import (IvpState, asymptotics_report, crosscheck_family, integrate_ivp,
                     integrate_ivp_states, ode_residual, wronskian)

TRIG = FamilyParams.trig(3.5, 2.0)
HYP = FamilyParams.hyp(1.0, 0.5)
TRIG_C = SuperpositionConstants(2 / 7, 7 / 4)
HYP_C = SuperpositionConstants(2.0, -1.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    limit: float
    passed: bool
    relation: str = "<"

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: {self.value:.3e} {self.relation} {self.limit:g}"


def _below(name, value, limit):
    return CheckResult(name, float(value), limit, bool(value < limit))


def _above(name, value, limit):
    return CheckResult(name, float(value), limit, bool(value >= limit), ">=")


def regular_times(p: FamilyParams, count: int = 1000, t1: float = 2.0,
                  min_cos: float = 0.25) -> np.ndarray:
    """``count`` times in ``[0, t1]``; trigonometric ones keep ``|cos w0 t| >= min_cos``."""
    t = np.linspace(0.0, t1, 20 * count)
    if p.kind == fam.TRIG:
        t = t[np.abs(np.cos(p.rate * t)) >= min_cos]
    return t[np.linspace(0, t.size - 1, count).astype(int)]


def _seed_residual(p):
    t = regular_times(p)
    return np.max(np.abs(riccati_residual(fam.seed(p), fam.coefficients(p), t)))


def _round_trip(p, t1, n=4001):
    grid = make_grid(0.0, t1, n)
    c = fam.coefficients(p)
    sol = alpha_numeric(c, fam.seed(p), fam.numeric_lambda(p), grid)
    back = reconstruct_fg(sol)
    return max(np.max(np.abs(back.f.values - sample(c.f, grid).values)),
               np.max(np.abs(back.g.values - sample(c.g, grid).values)))


def alpha_errors(p, t1, sizes=(21, 41, 81, 161)):
    """Max-norm error of the quadrature ``alpha`` against the closed form."""
    out = []
    for n in sizes:
        grid = make_grid(0.0, t1, n)
        sol = alpha_numeric(fam.coefficients(p), fam.seed(p), fam.numeric_lambda(p), grid)
        out.append(float(np.max(np.abs(sol.alpha.values - fam.factors(p, grid.samples)[0]))))
    return out


def _min_ratio(errors):
    return min(a / b for a, b in zip(errors, errors[1:]))


def _bernoulli(p, t):
    grid = make_grid(0.0, 2 * t, 3)
    sol = fam.closed_factor_solution(p, grid)
    return abs(bernoulli_residual(sol, fam.seed(p), fam.coefficients(p), t))


def solution_residual(p, c, t1, n=2001):
    grid = make_grid(0.0, t1, n)
    return ode_residual(lambda t: fam.solution(p, c, t), fam.partner_ode(p), grid,
                        lambda t: fam.solution(p, c, t, True)[1],
                        lambda t: fam.solution(p, c, t, True)[2])


def rk_errors(p, c, t1, sizes):
    y0, dy0, _ = fam.solution(p, c, 0.0, True)
    out = []
    for n in sizes:
        grid = make_grid(0.0, t1, n)
        y = integrate_ivp(fam.partner_ode(p), IvpState(0.0, y0, dy0), grid)
        out.append(float(np.max(np.abs(y.values - fam.solution(p, c, grid.samples)))))
    return out


def abel_deviation(p, t1, n=4001):
    """Max ``|W(t) - W(0) exp(-int F)|`` for two RK solutions."""
    grid = make_grid(0.0, t1, n)
    ode = fam.partner_ode(p)
    y1, d1 = integrate_ivp_states(ode, IvpState(0.0, 1.0, 0.0), grid)
    y2, d2 = integrate_ivp_states(ode, IvpState(0.0, 0.0, 1.0), grid)
    w = y1.values * d2.values - d1.values * y2.values
    decay = np.exp(-cumulative_integral(sample(ode.F, grid)).values)
    return float(np.max(np.abs(w - w[0] * decay)))


def mode_wronskian_drift(kind, rate, t):
    """Max relative deviation of the mode Wronskian from ``rate``."""
    if kind == "v":
        (a, b), (da, db) = fam.trig_v_modes(rate, t), fam.trig_v_mode_derivatives(rate, t)
    else:
        u1, u2, w1, w2 = fam.hyp_u_w_modes(rate, t)
        du1, du2, dw1, dw2 = fam.hyp_u_w_mode_derivatives(rate, t)
        a, b, da, db = (u1, u2, du1, du2) if kind == "u" else (w1, w2, dw1, dw2)
    w = [wronskian(IvpState(s, a[i], da[i]), IvpState(s, b[i], db[i]))
         for i, s in enumerate(t)]
    return float(np.max(np.abs(np.array(w) - rate)) / rate)


def v_connection_deviation(p: FamilyParams, c: SuperpositionConstants, t) -> float:
    y = fam.trig_solution(p, c, t)
    return float(np.max(np.abs(y - fam.trig_v_connection(p, t))))


def v_connection_corrected_deviation(p: FamilyParams, t) -> float:
    """Connection with ``C1 = 1/w0``, ``C2 = 2 w0``: ``y = -i cos (v1 + i v2)/sqrt(lam - cos^2)``."""
    w0 = p.rate
    y = fam.trig_solution(p, SuperpositionConstants(1 / w0, 2 * w0), t)
    v1, v2 = fam.trig_v_modes(w0, t)
    rhs = -1j * np.cos(w0 * t) * (v1 + 1j * v2) / np.sqrt(p.lam - np.cos(w0 * t) ** 2 + 0j)
    return float(np.max(np.abs(y - rhs)))


def _factorize_suite():
    yield _below("riccati residual (trig)", _seed_residual(TRIG), 1e-12)
    yield _below("riccati residual (hyp)", _seed_residual(HYP), 1e-12)
    yield _below("round trip f,g (trig, [0,0.4])", _round_trip(TRIG, 0.4), 1e-4)
    yield _below("round trip f,g (hyp, [0,2])", _round_trip(HYP, 2.0), 1e-4)
    yield _below("bernoulli residual (trig, t=0.1)", _bernoulli(TRIG, 0.1), 1e-9)
    yield _below("bernoulli residual (hyp, t=1)", _bernoulli(HYP, 1.0), 1e-9)
    yield _above("alpha convergence ratio (trig)", _min_ratio(alpha_errors(TRIG, 0.4)), 8)
    yield _above("alpha convergence ratio (hyp)", _min_ratio(alpha_errors(HYP, 2.0)), 8)


def _families_suite():
    t = regular_times(TRIG, 997, 4.0)
    d = TRIG.lam - np.cos(TRIG.rate * t) ** 2
    alt = TRIG.rate ** 2 * (np.sin(TRIG.rate * t) ** 4 + TRIG.lam - 1) / d ** 2
    yield _below("trig frequency identity", np.max(np.abs(fam.trig_frequency(TRIG, t) - alt)), 1e-12)
    a = asymptotics_report(HYP, 10.0)
    yield _below("hyp |zeta(10)|", a.max_residual, 1e-6)
    yield _below("hyp |G(10) + k0^2|", a.max_deviation, 1e-6)
    period = math.pi / TRIG.rate
    im = np.imag(fam.trig_solution(TRIG, TRIG_C, t))
    im_shift = np.imag(fam.trig_solution(TRIG, TRIG_C, t + period))
    yield _below("trig Im y periodicity", np.max(np.abs(im - im_shift)), 1e-9)
    yield _below("v connection (C2 = 2 w0)", v_connection_corrected_deviation(TRIG, t), 1e-10)
    yield _below("v Wronskian drift", mode_wronskian_drift("v", TRIG.rate, t), 1e-9)
    th = np.linspace(-3.0, 3.0, 601)
    yield _below("u Wronskian drift", mode_wronskian_drift("u", HYP.rate, th), 1e-9)
    yield _below("w Wronskian drift", mode_wronskian_drift("w", HYP.rate, th), 1e-9)
    scans = (fam.singularity_scan(TRIG, make_grid(-10, 10, 20001))
             + fam.singularity_scan(HYP, make_grid(-10, 10, 20001)))
    yield _below("roots found for nonsingular parameters", len(scans), 1)
    roots = fam.singularity_scan(FamilyParams.trig(1.0, 0.5), make_grid(0, 2, 2001))
    yield _below("first trig root vs pi/4", abs(roots[0] - math.pi / 4) if roots else math.inf, 1e-9)


def _verify_suite():
    yield _below("trig solution residual [0,2]", solution_residual(TRIG, TRIG_C, 2.0), 1e-9)
    yield _below("hyp solution residual [0,5]", solution_residual(HYP, HYP_C, 5.0), 1e-9)
    yield _below("RK4 vs closed form (trig, n=8001)", rk_errors(TRIG, TRIG_C, 2.0, (8001,))[0], 1e-6)
    yield _below("RK4 vs closed form (hyp, n=8001)", rk_errors(HYP, HYP_C, 5.0, (8001,))[0], 1e-6)
    yield _above("RK4 order ratio (trig)", _min_ratio(rk_errors(TRIG, TRIG_C, 2.0, (1001, 2001, 4001))), 12)
    yield _above("RK4 order ratio (hyp)", _min_ratio(rk_errors(HYP, HYP_C, 5.0, (1001, 2001, 4001))), 12)
    yield _below("crosscheck F,G (trig)", crosscheck_family(TRIG, make_grid(0, 0.4, 4001)).max_deviation, 1e-4)
    yield _below("crosscheck F,G (hyp)", crosscheck_family(HYP, make_grid(0, 2, 4001)).max_deviation, 1e-4)
    yield _below("Abel relation (trig, [0,0.4])", abel_deviation(TRIG, 0.4), 1e-6)
    yield _below("Abel relation (hyp, [0,5])", abel_deviation(HYP, 5.0), 1e-6)


SUITES: dict[str, Callable] = {
    "factorize": _factorize_suite,
    "families": _families_suite,
    "verify": _verify_suite,
}


def run_suite(name: str) -> list[CheckResult]:
    if name == "all":
        return [r for suite in SUITES.values() for r in suite()]
    try:
        return list(SUITES[name]())
    except KeyError:
        raise ValueError(f"unknown suite {name!r}") from None
