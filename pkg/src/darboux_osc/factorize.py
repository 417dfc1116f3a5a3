"""Alpha-beta factorization of ``y'' + f y' + g y = 0`` and its Darboux partner.

Writing the equation as ``B^- B^+ y = 0`` with

    B^- = alpha^{-1} D + beta,     B^+ = alpha D + beta,

forces ``beta = h * alpha`` for a Riccati solution ``h`` of
``-h' - f h + h**2 + g = 0`` and a Bernoulli equation for ``alpha``.
Swapping the factors gives the partner ``y'' + F y' + G y = 0`` with

    F = f - 2 alpha'/alpha,     G = g + beta' (alpha - 1/alpha).

Only the plus-sign branch of ``B^-`` is handled. The quantum-mechanical
variant (``f = 0`` with the sign of the linear Bernoulli term flipped) is
not implemented.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DivisionBySingularAlpha, SingularDenominator
from .funcs import SampledField, TimeGrid, central_derivative, cumulative_integral, sample

__all__ = [
    "CoefficientPair",
    "RiccatiSeed",
    "FactorSolution",
    "PartnerODE",
    "riccati_residual",
    "alpha_numeric",
    "partner_coefficients",
    "reconstruct_fg",
    "bernoulli_residual",
    "undamped_condition",
    "RADICAND_TOL",
    "constant",
]

ScalarField = Union[Callable[[np.ndarray], np.ndarray], SampledField]

RADICAND_TOL = 1e-8


def constant(c: complex) -> Callable:
    """Vectorised constant function of time."""
    def func(t):
        return np.full(np.shape(t), c, dtype=complex) if np.ndim(t) else complex(c)
    return func


@dataclass(frozen=True)
class CoefficientPair:
    """Damping coefficient ``f`` and frequency coefficient ``g``."""

    f: ScalarField
    g: ScalarField


@dataclass(frozen=True)
class RiccatiSeed:
    """A particular solution ``h`` of the Riccati equation with its derivative."""

    h: ScalarField
    h_prime: ScalarField


@dataclass(frozen=True)
class FactorSolution:
    lam: complex
    alpha: SampledField
    beta: SampledField
    alpha_prime: SampledField
    beta_prime: SampledField
    radicand: SampledField | None = None

    @property
    def grid(self) -> TimeGrid:
        return self.alpha.grid

    @classmethod
    def from_alpha(cls, alpha: SampledField, h: SampledField, lam: complex = np.nan):
        """Build ``beta = h*alpha`` and finite-difference both derivatives."""
        beta = h * alpha
        return cls(lam, alpha, beta, central_derivative(alpha), central_derivative(beta))


@dataclass(frozen=True)
class PartnerODE:
    """Coefficients of ``y'' + F y' + G y = 0``."""

    F: ScalarField
    G: ScalarField


def _eval(func: ScalarField, t):
    return np.asarray(func(t), dtype=complex) if np.ndim(t) else complex(func(t))


def riccati_residual(seed: RiccatiSeed, coeffs: CoefficientPair, t):
    """``-h' - f h + h**2 + g``; NaN where any term is not finite.

    Accepts scalar or array ``t`` so that batch scans keep going past poles
    of ``h``.
    """
    with np.errstate(all="ignore"):
        h = _eval(seed.h, t)
        res = -_eval(seed.h_prime, t) - _eval(coeffs.f, t) * h + h * h + _eval(coeffs.g, t)
    if np.ndim(res):
        res = np.where(np.isfinite(res), res, np.nan + 0j)
    elif not np.isfinite(res):
        res = complex(np.nan, np.nan)
    return res


def radicand_crossings(radicand: SampledField, tol: float = RADICAND_TOL) -> list[float]:
    """Times where a (nearly real) radicand passes through zero.

    A sample with ``|R| < tol`` counts as a crossing, as does a sign change
    of ``Re R`` between neighbouring samples when ``|Im R| < tol`` at both.
    Crossing times between samples are located by linear interpolation.
    """
    r = radicand.values
    t = radicand.t
    times = []
    small = np.abs(r) < tol
    re, im = r.real, np.abs(r.imag)
    for k in range(r.size - 1):
        if small[k]:
            times.append(t[k])
        elif (not small[k + 1] and re[k] * re[k + 1] < 0
              and im[k] < tol and im[k + 1] < tol):
            times.append(t[k] - re[k] * (t[k + 1] - t[k]) / (re[k + 1] - re[k]))
    if small[-1]:
        times.append(t[-1])
    return times


def alpha_numeric(coeffs: CoefficientPair, seed: RiccatiSeed, lam: complex,
                  grid: TimeGrid) -> FactorSolution:
    """Solve the Bernoulli equation for ``alpha`` by quadrature.

    ``alpha = exp(-I1) / sqrt(lam + I2)`` with ``I1 = int (h - f)`` and
    ``I2 = int 2 h exp(-2 I1)``, both from ``grid.t0``. ``lam`` is the raw
    integration constant for that lower limit, so ``alpha(t0) = lam**-0.5``.
    The principal square root is used.

    Raises
    ------
    SingularDenominator
        If the radicand ``lam + I2`` vanishes anywhere on the grid.
    """
    h = sample(seed.h, grid)
    f = sample(coeffs.f, grid)
    if not (h.is_finite() and f.is_finite()):
        raise ValueError("seed or damping coefficient is not finite on the grid")
    decay = SampledField(grid, np.exp(-cumulative_integral(h - f).values))
    radicand = lam + cumulative_integral(2.0 * h * decay * decay)
    crossings = radicand_crossings(radicand)
    if crossings:
        raise SingularDenominator(crossings)
    alpha = decay / SampledField(grid, np.sqrt(radicand.values))
    beta = h * alpha
    return FactorSolution(complex(lam), alpha, beta, central_derivative(alpha),
                          central_derivative(beta), radicand)


def _check_alpha(alpha: SampledField):
    zero = alpha.values == 0
    if np.any(zero):
        raise DivisionBySingularAlpha(alpha.t[zero])


def partner_coefficients(coeffs: CoefficientPair, sol: FactorSolution) -> PartnerODE:
    """Sampled coefficients of the Darboux partner ``B^+ B^- y = 0``."""
    _check_alpha(sol.alpha)
    grid = sol.grid
    a = sol.alpha
    F = sample(coeffs.f, grid) - 2.0 * sol.alpha_prime / a
    G = sample(coeffs.g, grid) + sol.beta_prime * (a - 1.0 / a)
    return PartnerODE(F, G)


def reconstruct_fg(sol: FactorSolution) -> CoefficientPair:
    """Expand ``B^- B^+`` back into ``(f, g)``; inverse of the factorization."""
    _check_alpha(sol.alpha)
    a, b = sol.alpha, sol.beta
    f = sol.alpha_prime / a + a * b + b / a
    g = b * b + sol.beta_prime / a
    return CoefficientPair(f, g)


def bernoulli_residual(sol: FactorSolution, seed: RiccatiSeed,
                       coeffs: CoefficientPair, t: float) -> complex:
    """``alpha' + h alpha**3 + (h - f) alpha`` at a grid sample ``t``."""
    a = sol.alpha(t)
    h = _eval(seed.h, t)
    return sol.alpha_prime(t) + h * a ** 3 + (h - _eval(coeffs.f, t)) * a


def undamped_condition(coeffs: CoefficientPair, sol: FactorSolution, t: float,
                       tol: float = 1e-8) -> bool:
    """True iff the partner damping ``F = f - 2 alpha'/alpha`` vanishes at ``t``."""
    a = sol.alpha(t)
    if a == 0:
        raise DivisionBySingularAlpha([t])
    return bool(abs(_eval(coeffs.f, t) - 2.0 * sol.alpha_prime(t) / a) < tol)
