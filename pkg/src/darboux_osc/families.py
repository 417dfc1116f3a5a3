"""Closed forms for the trigonometric and hyperbolic partner oscillators.

Trigonometric family (seed of ``y'' + w0**2 y = 0``)::

    h = w0 tan(w0 t),  alpha = cos(w0 t)/sqrt(lam - cos^2),  beta = h alpha

Hyperbolic family (seed of ``y'' - k0**2 y = 0``)::

    h = -k0 tanh(k0 t),  alpha = cosh(k0 t)/sqrt(lam - cosh^2),  beta = h alpha

Square roots take the principal branch, so ``sqrt(-x) = +i sqrt(x)`` for
``x > 0``. All mode normalisation constants are fixed to 1.

The printed hyperbolic frequency coefficient carries ``sinh(2 k0 t)`` in the
second term and decays to zero. Re-deriving ``G = g + beta' (alpha - 1/alpha)``
gives ``sinh(2 k0 t)**2`` there, i.e. ``-k0**2 (sinh^4 + lam - 1)/(cosh^2 - lam)**2``,
which tends to ``-k0**2``. :func:`hyp_frequency` uses the derived form;
:func:`hyp_frequency_as_printed` keeps the other for regression tests.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import SingularTime
from .factorize import CoefficientPair, FactorSolution, PartnerODE, RiccatiSeed, constant
from .funcs import SampledField, TimeGrid

TRIG = "trigonometric"
HYP = "hyperbolic"
_KIND_ALIASES = {"trig": TRIG, TRIG: TRIG, "hyp": HYP, HYP: HYP}

SINGULAR_TOL = 1e-12
ROOT_TOL = 1e-10


@dataclass(frozen=True)
class FamilyParams:
    """Family selector, rate (``w0`` or ``k0``) and deformation ``lam``."""

    kind: Literal["trigonometric", "hyperbolic"]
    rate: float
    lam: float

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", _KIND_ALIASES[self.kind])
        except KeyError:
            raise ValueError(f"unknown family kind {self.kind!r}") from None
        if not self.rate > 0:
            raise ValueError(f"rate must be positive, got {self.rate}")

    @classmethod
    def trig(cls, omega0: float, lam: float) -> "FamilyParams":
        return cls(TRIG, omega0, lam)

    @classmethod
    def hyp(cls, k0: float, lam: float) -> "FamilyParams":
        return cls(HYP, k0, lam)


@dataclass(frozen=True)
class FamilySnapshot:
    t: float
    h: complex
    alpha: complex
    beta: complex
    zeta: complex
    G: complex
    F: complex


@dataclass(frozen=True)
class SuperpositionConstants:
    """Free constants ``(C1, C2)`` for the trigonometric solution, ``(C3, C4)`` otherwise."""

    c_a: complex
    c_b: complex


def _require(p: FamilyParams, kind: str):
    if p.kind != kind:
        raise ValueError(f"expected {kind} parameters, got {p.kind}")


def _time(t):
    """Real or complex time array; complex times are used for contour detours."""
    t = np.asarray(t)
    return t.astype(complex) if np.iscomplexobj(t) else t.astype(float)


def _inv_sqrt(d):
    """Principal ``d**-0.5`` for real or complex ``d``."""
    return 1.0 / np.sqrt(np.asarray(d, dtype=complex))


def _scalar(x, t):
    return complex(x) if np.ndim(t) == 0 else x


def _guard(d, t):
    if np.ndim(t) == 0 and abs(d) < SINGULAR_TOL:
        raise SingularTime(t)


# ---------------------------------------------------------------- trigonometric

def _trig_radicand(w0, lam, t):
    """``lam - cos^2(w0 t)`` with its first two derivatives."""
    x = w0 * _time(t)
    d = lam - np.cos(x) ** 2
    return d, w0 * np.sin(2 * x), 2 * w0 ** 2 * np.cos(2 * x)


def trig_seed(omega0: float) -> RiccatiSeed:
    return RiccatiSeed(
        h=lambda t: omega0 * np.tan(omega0 * np.asarray(t)),
        h_prime=lambda t: omega0 ** 2 / np.cos(omega0 * np.asarray(t)) ** 2,
    )


def trig_coefficients(omega0: float) -> CoefficientPair:
    return CoefficientPair(constant(0.0), constant(omega0 ** 2))


def trig_factors(p: FamilyParams, t):
    """``(alpha, beta, alpha', beta')`` with analytic derivatives."""
    _require(p, TRIG)
    w0, lam = p.rate, p.lam
    d, _, _ = _trig_radicand(w0, lam, t)
    _guard(d, t)
    x = w0 * _time(t)
    r = _inv_sqrt(d)
    r3 = r ** 3
    c, s = np.cos(x), np.sin(x)
    out = (c * r, w0 * s * r, -lam * w0 * s * r3, (lam - 1) * w0 ** 2 * c * r3)
    return tuple(_scalar(v, t) for v in out)


def trig_damping_ratio(p: FamilyParams, t):
    _require(p, TRIG)
    d, _, _ = _trig_radicand(p.rate, p.lam, t)
    _guard(d, t)
    return p.lam * np.tan(p.rate * _time(t)) / d


def trig_frequency(p: FamilyParams, t):
    """Time-dependent frequency coefficient ``w0**2 (t)``."""
    _require(p, TRIG)
    d, _, _ = _trig_radicand(p.rate, p.lam, t)
    _guard(d, t)
    s2 = np.sin(2 * p.rate * np.asarray(t)) ** 2
    return p.rate ** 2 * (1.0 / d - s2 / (4.0 * d ** 2))


def trig_snapshot(p: FamilyParams, t: float) -> FamilySnapshot:
    alpha, beta, _, _ = trig_factors(p, t)
    zeta = complex(trig_damping_ratio(p, t))
    return FamilySnapshot(
        t=float(t),
        h=complex(p.rate * math.tan(p.rate * t)),
        alpha=alpha,
        beta=beta,
        zeta=zeta,
        G=complex(trig_frequency(p, t)),
        F=2 * zeta * p.rate,
    )


def _check_nonsingular(p: FamilyParams):
    if not nonsingular_domain(p):
        warnings.warn(f"{p} lies outside the nonsingular domain", RuntimeWarning,
                      stacklevel=3)


def trig_solution(p: FamilyParams, c: SuperpositionConstants, t, derivatives: bool = False):
    """``y = [C1 (w0 t + sin(2 w0 t)/2) - i C2] / (2 sqrt(lam - cos^2 w0 t))``.

    With ``derivatives=True`` returns ``(y, y', y'')``.
    """
    _require(p, TRIG)
    _check_nonsingular(p)
    w0 = p.rate
    d, d1, d2 = _trig_radicand(w0, p.lam, t)
    _guard(d, t)
    x = w0 * _time(t)
    num = 0.5 * (c.c_a * (x + 0.5 * np.sin(2 * x)) - 1j * c.c_b)
    num1 = c.c_a * w0 * np.cos(x) ** 2
    num2 = -c.c_a * w0 ** 2 * np.sin(2 * x)
    return _quotient(num, num1, num2, d, d1, d2, t, derivatives)


def trig_v_modes(omega0: float, t):
    """Singular modes ``(v1, v2)`` of the standard Darboux partner."""
    x = omega0 * _time(t)
    c = np.cos(x)
    if np.ndim(t) == 0 and abs(c) < SINGULAR_TOL:
        raise SingularTime(float(t))
    v1 = omega0 / c
    v2 = (x / 2 + 0.25 * np.sin(2 * x)) / (omega0 * c)
    return _scalar(v1, t), _scalar(v2, t)


def trig_v_mode_derivatives(omega0: float, t):
    x = omega0 * _time(t)
    c, s = np.cos(x), np.sin(x)
    if np.ndim(t) == 0 and abs(c) < SINGULAR_TOL:
        raise SingularTime(float(t))
    dv1 = omega0 ** 2 * s / c ** 2
    dv2 = c + (x / 2 + 0.25 * np.sin(2 * x)) * s / c ** 2
    return _scalar(dv1, t), _scalar(dv2, t)


def trig_v_connection(p: FamilyParams, t):
    """``-cos(w0 t) (v1 + i v2) / sqrt(cos^2 w0 t - lam)``, principal branch."""
    _require(p, TRIG)
    x = p.rate * _time(t)
    v1, v2 = trig_v_modes(p.rate, t)
    return _scalar(-np.cos(x) * (v1 + 1j * v2) * _inv_sqrt(np.cos(x) ** 2 - p.lam), t)


# ------------------------------------------------------------------- hyperbolic

def _hyp_radicand(k0, lam, t):
    """``lam - cosh^2(k0 t)`` with its first two derivatives."""
    x = k0 * _time(t)
    d = lam - np.cosh(x) ** 2
    return d, -k0 * np.sinh(2 * x), -2 * k0 ** 2 * np.cosh(2 * x)


def hyp_seed(k0: float) -> RiccatiSeed:
    return RiccatiSeed(
        h=lambda t: -k0 * np.tanh(k0 * np.asarray(t)),
        h_prime=lambda t: -k0 ** 2 / np.cosh(k0 * np.asarray(t)) ** 2,
    )


def hyp_coefficients(k0: float) -> CoefficientPair:
    return CoefficientPair(constant(0.0), constant(-k0 ** 2))


def hyp_factors(p: FamilyParams, t):
    """``(alpha, beta, alpha', beta')`` with analytic derivatives."""
    _require(p, HYP)
    k0, lam = p.rate, p.lam
    d, _, _ = _hyp_radicand(k0, lam, t)
    _guard(d, t)
    x = k0 * _time(t)
    r = _inv_sqrt(d)
    r3 = r ** 3
    ch, sh = np.cosh(x), np.sinh(x)
    out = (ch * r, -k0 * sh * r, lam * k0 * sh * r3, -(lam - 1) * k0 ** 2 * ch * r3)
    return tuple(_scalar(v, t) for v in out)


def hyp_damping_ratio(p: FamilyParams, t):
    _require(p, HYP)
    d, _, _ = _hyp_radicand(p.rate, p.lam, t)
    _guard(d, t)
    return p.lam * np.tanh(p.rate * _time(t)) / (-d)


def hyp_frequency(p: FamilyParams, t):
    """Frequency-like coefficient ``-k0**2 (sinh^4 + lam - 1)/(cosh^2 - lam)**2``."""
    _require(p, HYP)
    d, _, _ = _hyp_radicand(p.rate, p.lam, t)
    _guard(d, t)
    sh = np.sinh(p.rate * _time(t))
    return -p.rate ** 2 * (sh ** 4 + p.lam - 1) / d ** 2


def hyp_frequency_as_printed(p: FamilyParams, t):
    """The printed variant with ``sinh(2 k0 t)`` unsquared; tends to 0, not ``-k0**2``."""
    _require(p, HYP)
    x = p.rate * _time(t)
    e = np.cosh(x) ** 2 - p.lam
    return p.rate ** 2 * (1.0 / e - np.sinh(2 * x) / (4.0 * e ** 2))


def hyp_snapshot(p: FamilyParams, t: float) -> FamilySnapshot:
    alpha, beta, _, _ = hyp_factors(p, t)
    zeta = complex(hyp_damping_ratio(p, t))
    return FamilySnapshot(
        t=float(t),
        h=complex(-p.rate * math.tanh(p.rate * t)),
        alpha=alpha,
        beta=beta,
        zeta=zeta,
        G=complex(hyp_frequency(p, t)),
        F=2 * zeta * p.rate,
    )


def hyp_solution(p: FamilyParams, c: SuperpositionConstants, t, derivatives: bool = False):
    """``y = [(C3 + i pi C4) + C4 (2 k0 t + sinh 2 k0 t)] / (4 sqrt(lam - cosh^2 k0 t))``."""
    _require(p, HYP)
    _check_nonsingular(p)
    k0 = p.rate
    d, d1, d2 = _hyp_radicand(k0, p.lam, t)
    _guard(d, t)
    x = k0 * _time(t)
    num = 0.25 * ((c.c_a + 1j * math.pi * c.c_b) + c.c_b * (2 * x + np.sinh(2 * x)))
    num1 = 0.5 * c.c_b * k0 * (1 + np.cosh(2 * x))
    num2 = c.c_b * k0 ** 2 * np.sinh(2 * x)
    return _quotient(num, num1, num2, d, d1, d2, t, derivatives)


def hyp_u_w_modes(k0: float, t):
    """``(u1, u2, w1, w2)``: modes of the standard partner and of ``w'' = k0**2 w``."""
    x = k0 * _time(t)
    ch = np.cosh(x)
    u1 = k0 / ch
    u2 = (x / 2 + 0.25 * np.sinh(2 * x)) / (k0 * ch)
    return tuple(_scalar(v, t) for v in (u1, u2, ch, np.sinh(x)))


def hyp_u_w_mode_derivatives(k0: float, t):
    x = k0 * _time(t)
    ch, sh = np.cosh(x), np.sinh(x)
    du1 = -k0 ** 2 * sh / ch ** 2
    du2 = ch - (x / 2 + 0.25 * np.sinh(2 * x)) * sh / ch ** 2
    return tuple(_scalar(v, t) for v in (du1, du2, k0 * sh, k0 * ch))


# --------------------------------------------------------------------- shared

def _quotient(num, num1, num2, d, d1, d2, t, derivatives):
    """``num / sqrt(d)`` and, optionally, its first two derivatives."""
    r = _inv_sqrt(d)
    y = num * r
    if not derivatives:
        return _scalar(y, t)
    r1 = -0.5 * d1 * r ** 3
    r2 = 0.75 * d1 ** 2 * r ** 5 - 0.5 * d2 * r ** 3
    dy = num1 * r + num * r1
    d2y = num2 * r + 2 * num1 * r1 + num * r2
    return _scalar(y, t), _scalar(dy, t), _scalar(d2y, t)


def seed(p: FamilyParams) -> RiccatiSeed:
    return trig_seed(p.rate) if p.kind == TRIG else hyp_seed(p.rate)


def coefficients(p: FamilyParams) -> CoefficientPair:
    return trig_coefficients(p.rate) if p.kind == TRIG else hyp_coefficients(p.rate)


def factors(p: FamilyParams, t):
    return trig_factors(p, t) if p.kind == TRIG else hyp_factors(p, t)


def damping_ratio(p: FamilyParams, t):
    return trig_damping_ratio(p, t) if p.kind == TRIG else hyp_damping_ratio(p, t)


def frequency(p: FamilyParams, t):
    return trig_frequency(p, t) if p.kind == TRIG else hyp_frequency(p, t)


def snapshot(p: FamilyParams, t: float) -> FamilySnapshot:
    return trig_snapshot(p, t) if p.kind == TRIG else hyp_snapshot(p, t)


def solution(p: FamilyParams, c: SuperpositionConstants, t, derivatives: bool = False):
    fn = trig_solution if p.kind == TRIG else hyp_solution
    return fn(p, c, t, derivatives)


def partner_ode(p: FamilyParams) -> PartnerODE:
    """Closed-form ``F = 2 zeta rate`` and ``G`` as vectorised callables."""
    return PartnerODE(
        F=lambda t: 2.0 * p.rate * damping_ratio(p, t),
        G=lambda t: frequency(p, t),
    )


def closed_factor_solution(p: FamilyParams, grid: TimeGrid) -> FactorSolution:
    """Closed-form factors sampled on ``grid``, with analytic derivatives."""
    a, b, da, db = factors(p, grid.samples)
    return FactorSolution(p.lam, *(SampledField(grid, v) for v in (a, b, da, db)))


def numeric_lambda(p: FamilyParams, t0: float = 0.0) -> complex:
    """Integration constant of the quadrature route for lower limit ``t0``.

    The quadrature route has ``alpha(t0) = lam_num**-0.5``, so
    ``lam_num = alpha_closed(t0)**-2``; for ``t0 = 0`` this is ``lam - 1``.
    """
    alpha = factors(p, float(t0))[0]
    if alpha == 0:
        raise SingularTime(float(t0), "alpha vanishes at the lower integration limit")
    return 1.0 / alpha ** 2


def denominator(p: FamilyParams, t):
    """``lam - cos^2(w0 t)`` or ``cosh^2(k0 t) - lam``."""
    x = p.rate * _time(t)
    if p.kind == TRIG:
        return p.lam - np.cos(x) ** 2
    return np.cosh(x) ** 2 - p.lam


def nonsingular_domain(p: FamilyParams) -> bool:
    if p.kind == TRIG:
        return not 0.0 <= p.lam <= 1.0
    return p.lam < 1.0


def singularity_scan(p: FamilyParams, grid: TimeGrid) -> list[float]:
    """Times in the window where the family denominator changes sign.

    Each bracket found on the grid is refined by bisection to ``ROOT_TOL``.
    Tangential zeros are reported only if they fall exactly on a sample.
    """
    t = grid.samples
    d = denominator(p, t)
    roots = []
    for k in range(t.size):
        if d[k] == 0.0:
            roots.append(float(t[k]))
        elif k + 1 < t.size and d[k] * d[k + 1] < 0:
            roots.append(_bisect(lambda s: float(denominator(p, s)), t[k], t[k + 1]))
    return roots


def _bisect(fn, a, b, tol=ROOT_TOL):
    fa = fn(a)
    while b - a > tol:
        m = 0.5 * (a + b)
        fm = fn(m)
        if fm == 0.0:
            return m
        if (fa < 0) == (fm < 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)
