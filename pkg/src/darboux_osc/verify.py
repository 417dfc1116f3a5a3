"""Numerical oracles for the partner oscillators.

Fixed-step RK4 on the complex state ``(y, y')``, substitution residuals,
Wronskians, large-time asymptotics and the closed-form versus quadrature
cross-check of the partner coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import families
from .errors import NonFiniteState, SingularDenominator
from .factorize import PartnerODE, alpha_numeric, partner_coefficients, reconstruct_fg
from .families import FamilyParams
from .funcs import SampledField, TimeGrid, central_derivative, sample

__all__ = [
    "IvpState",
    "VerificationReport",
    "integrate_ivp",
    "integrate_ivp_states",
    "ode_residual",
    "wronskian",
    "asymptotics_report",
    "crosscheck_family",
]


@dataclass(frozen=True)
class IvpState:
    t: float
    y: complex
    dy: complex


@dataclass
class VerificationReport:
    max_residual: float = 0.0
    max_deviation: float = 0.0
    wronskian_drift: float = 0.0
    flagged_times: list[float] = field(default_factory=list)
    derivatives: str = "analytic"
    passed: bool | None = None

    def __post_init__(self):
        for name in ("max_residual", "max_deviation", "wronskian_drift"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be non-negative")


# A step is routed around the real axis when step*|F| or step*sqrt|G| exceeds
# STIFF_SCALE anywhere on it; detour legs keep step*|F| below DETOUR_KAPPA.
STIFF_SCALE = 0.2
DETOUR_KAPPA = 0.05
MAX_LEG_STEPS = 200_000


def _rk4_step(coef, z, dz, y, v):
    """One classical RK4 step of ``y' = v, v' = -F v - G y`` with complex ``dz``."""
    f0, g0 = coef(z)
    fm, gm = coef(z + 0.5 * dz)
    f1, g1 = coef(z + dz)
    half = 0.5 * dz
    k1y, k1v = v, -f0 * v - g0 * y
    y2, v2 = y + half * k1y, v + half * k1v
    k2y, k2v = v2, -fm * v2 - gm * y2
    y3, v3 = y + half * k2y, v + half * k2v
    k3y, k3v = v3, -fm * v3 - gm * y3
    y4, v4 = y + dz * k3y, v + dz * k3v
    k4y, k4v = v4, -f1 * v4 - g1 * y4
    return (y + dz / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y),
            v + dz / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v))


class _Stalled(Exception):
    pass


def _leg(coef, z0, z1, y, v, h, max_steps=MAX_LEG_STEPS):
    """Integrate along the segment ``z0 -> z1`` with coefficient-limited steps."""
    z = z0
    for _ in range(max_steps):
        rem = z1 - z
        if rem == 0:
            return y, v
        f, g = coef(z)
        scale = max(abs(f), math.sqrt(abs(g)))
        if not math.isfinite(scale):
            raise NonFiniteState(z.real)
        s = h if scale == 0 else min(h, DETOUR_KAPPA / scale)
        if s >= abs(rem):
            dz, z_next = rem, z1
        else:
            dz = rem / abs(rem) * s
            z_next = z + dz
        y, v = _rk4_step(coef, z, dz, y, v)
        if not (math.isfinite(abs(y)) and math.isfinite(abs(v))):
            raise NonFiniteState(z_next.real)
        z = z_next
    raise _Stalled(z.real)


def _stiff_clusters(t, scale, radius):
    """Sample-index spans ``(a, b, radius)`` to be bridged by complex detours."""
    stiff = np.flatnonzero(scale > STIFF_SCALE)
    if stiff.size == 0:
        return []
    groups = np.split(stiff, np.flatnonzero(np.diff(stiff) > 1) + 1)
    centres = [t[g[np.argmax(scale[g])]] for g in groups]
    if len(centres) > 1:
        radius = min(radius, 0.25 * float(np.min(np.diff(centres))))
    spans = []
    for g, centre in zip(groups, centres):
        a = max(0, int(np.searchsorted(t, centre - radius, side="right")) - 1)
        b = min(t.size - 1, int(np.searchsorted(t, centre + radius, side="left")))
        a, b = min(a, int(g[0])), max(b, int(g[-1]) + 1)
        if spans and a <= spans[-1][1]:
            spans[-1] = (spans[-1][0], max(b, spans[-1][1]))
        else:
            spans.append((a, b))
    return [(a, b, radius) for a, b in spans]


# substep budget for one grid interval on the real axis next to a pole
_GRADED_STEPS = 2000


def _bridge(coef, t, a, b, y, v, h, radius, ys, dys):
    """Cross ``[t_a, t_b]`` above the real axis and fill the samples inside.

    The state at ``t_b`` comes from the path ``t_a -> t_a + i r -> t_b + i r
    -> t_b``. Interior samples are reached along the real axis, forwards from
    ``t_a`` and backwards from ``t_b``; both directions contract towards the
    pole and a stalled leg marks the interval that contains it.
    """
    lift = 1j * radius
    uy, uv = _leg(coef, complex(t[a]), t[a] + lift, y, v, h)
    uy, uv = _leg(coef, t[a] + lift, t[b] + lift, uy, uv, h)
    ys[b], dys[b] = _leg(coef, t[b] + lift, complex(t[b]), uy, uv, h)
    j, fy, fv = a, y, v
    while j + 1 < b:
        try:
            fy, fv = _leg(coef, complex(t[j]), complex(t[j + 1]), fy, fv, h, _GRADED_STEPS)
        except _Stalled:
            break
        j += 1
        ys[j], dys[j] = fy, fv
    i, by, bv = b, ys[b], dys[b]
    while i - 1 > j:
        try:
            by, bv = _leg(coef, complex(t[i]), complex(t[i - 1]), by, bv, h, _GRADED_STEPS)
        except _Stalled as exc:
            raise NonFiniteState(float(exc.args[0])) from None
        i -= 1
        ys[i], dys[i] = by, bv


def integrate_ivp_states(ode: PartnerODE, init: IvpState, grid: TimeGrid,
                         detour_radius: float | None = None):
    """RK4 for ``y'' = -F y' - G y``; returns sampled ``(y, y')``.

    Ordinary steps use the fixed grid step with ``F`` and ``G`` evaluated at
    samples and half steps. Where a coefficient is too large for the step
    (an isolated pole of ``F`` or ``G`` on or near the real axis) the
    integration leaves the real line: it climbs to ``t + i*detour_radius``,
    runs parallel to the axis past the pole and comes back down. This needs
    ``F`` and ``G`` to accept complex times and assumes the solution is
    analytic inside the detour rectangle, which holds for apparent
    singularities such as the zeros of ``alpha`` in the trigonometric family.

    ``detour_radius`` defaults to 5% of the window, capped at a quarter of
    the spacing between poles; it must stay clear of complex singularities
    of the coefficients.
    """
    if not math.isclose(init.t, grid.t0, rel_tol=0, abs_tol=1e-12 * max(1, abs(grid.t0))):
        raise ValueError("initial state must sit at the start of the grid")
    t = grid.samples
    h = grid.step
    mid = t[:-1] + 0.5 * h
    with np.errstate(all="ignore"):
        F = np.broadcast_to(np.asarray(ode.F(t), dtype=complex), t.shape)
        G = np.broadcast_to(np.asarray(ode.G(t), dtype=complex), t.shape)
        Fm = np.broadcast_to(np.asarray(ode.F(mid), dtype=complex), mid.shape)
        Gm = np.broadcast_to(np.asarray(ode.G(mid), dtype=complex), mid.shape)
        size = np.maximum(np.abs(F), np.sqrt(np.abs(G)))
        msize = np.maximum(np.abs(Fm), np.sqrt(np.abs(Gm)))
    size = np.where(np.isfinite(size), size, np.inf)
    msize = np.where(np.isfinite(msize), msize, np.inf)
    if not math.isfinite(size[0]):
        raise NonFiniteState(t[0])
    step_scale = h * np.maximum(np.maximum(size[:-1], size[1:]), msize)

    radius = 0.05 * (grid.t1 - grid.t0) if detour_radius is None else float(detour_radius)
    spans = {a: (b, max(r, 4 * h)) for a, b, r in _stiff_clusters(t, step_scale, radius)}

    def coef(z):
        with np.errstate(all="ignore"):
            return complex(ode.F(z)), complex(ode.G(z))

    Fl, Gl, Fml, Gml = F.tolist(), G.tolist(), Fm.tolist(), Gm.tolist()
    ys = [0j] * t.size
    dys = [0j] * t.size
    y, v = complex(init.y), complex(init.dy)
    ys[0], dys[0] = y, v
    half = 0.5 * h
    k = 0
    while k < t.size - 1:
        if k in spans:
            b, r = spans[k]
            _bridge(coef, t, k, b, y, v, h, r, ys, dys)
            y, v = ys[b], dys[b]
            k = b
            continue
        f0, g0, fm, gm, f1, g1 = Fl[k], Gl[k], Fml[k], Gml[k], Fl[k + 1], Gl[k + 1]
        k1y, k1v = v, -f0 * v - g0 * y
        y2, v2 = y + half * k1y, v + half * k1v
        k2y, k2v = v2, -fm * v2 - gm * y2
        y3, v3 = y + half * k2y, v + half * k2v
        k3y, k3v = v3, -fm * v3 - gm * y3
        y4, v4 = y + h * k3y, v + h * k3v
        k4y, k4v = v4, -f1 * v4 - g1 * y4
        y = y + h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y)
        v = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        if not (math.isfinite(abs(y)) and math.isfinite(abs(v))):
            raise NonFiniteState(t[k + 1])
        k += 1
        ys[k], dys[k] = y, v
    return SampledField(grid, np.array(ys)), SampledField(grid, np.array(dys))


def integrate_ivp(ode: PartnerODE, init: IvpState, grid: TimeGrid,
                  detour_radius: float | None = None) -> SampledField:
    """Sampled solution ``y`` of the initial-value problem."""
    return integrate_ivp_states(ode, init, grid, detour_radius)[0]


def _second_difference(f: SampledField) -> SampledField:
    """Second-order ``f''`` stencil, one-sided second order at the ends."""
    v, h2 = f.values, f.grid.step ** 2
    if v.size < 4:
        raise ValueError("second differences need at least 4 samples")
    d = np.empty_like(v)
    d[1:-1] = (v[:-2] - 2 * v[1:-1] + v[2:]) / h2
    d[0] = (2 * v[0] - 5 * v[1] + 4 * v[2] - v[3]) / h2
    d[-1] = (2 * v[-1] - 5 * v[-2] + 4 * v[-3] - v[-4]) / h2
    return SampledField(f.grid, d)


def ode_residual(y: Callable, ode: PartnerODE, grid: TimeGrid,
                 dy: Callable | None = None, d2y: Callable | None = None) -> float:
    """``max |y'' + F y' + G y| / (1 + |y|)`` over the grid.

    Derivatives default to central differences of the sampled ``y`` when not
    supplied.
    """
    t = grid.samples
    yv = sample(y, grid)
    dyv = sample(dy, grid) if dy is not None else central_derivative(yv)
    d2yv = sample(d2y, grid) if d2y is not None else _second_difference(yv)
    res = d2yv.values + ode.F(t) * dyv.values + ode.G(t) * yv.values
    return float(np.max(np.abs(res) / (1.0 + np.abs(yv.values))))


def residual_report(y: Callable, ode: PartnerODE, grid: TimeGrid,
                    dy: Callable | None = None, d2y: Callable | None = None,
                    tol: float | None = None) -> VerificationReport:
    mode = "analytic" if dy is not None and d2y is not None else "finite-difference"
    r = ode_residual(y, ode, grid, dy, d2y)
    return VerificationReport(max_residual=r, derivatives=mode,
                              passed=None if tol is None else r < tol)


def wronskian(s1: IvpState, s2: IvpState) -> complex:
    if s1.t != s2.t:
        raise ValueError("Wronskian needs states at the same time")
    return complex(s1.y * s2.dy - s1.dy * s2.y)


def asymptotics_report(p: FamilyParams, t_probe: float) -> VerificationReport:
    """Large-time decay of the hyperbolic damping ratio and of ``G + k0**2``.

    ``max_residual`` holds ``|zeta(t_probe)|`` and ``max_deviation`` holds
    ``|G(t_probe) + k0**2|``; both are required to sit below
    ``10 exp(-2 k0 t_probe)``.
    """
    if p.kind != families.HYP:
        raise ValueError("asymptotics are defined for the hyperbolic family")
    k0 = p.rate
    if t_probe < 5.0 / k0:
        raise ValueError(f"t_probe must be at least 5/k0 = {5.0 / k0}")
    zeta = abs(families.hyp_damping_ratio(p, t_probe))
    dev = abs(families.hyp_frequency(p, t_probe) + k0 ** 2)
    bound = 10.0 * math.exp(-2.0 * k0 * t_probe)
    return VerificationReport(max_residual=float(zeta), max_deviation=float(dev),
                              passed=bool(zeta < bound and dev < bound))


def crosscheck_family(p: FamilyParams, grid: TimeGrid) -> VerificationReport:
    """Compare partner coefficients from closed forms and from quadrature.

    ``max_deviation`` is the larger of the max-norm differences in ``F`` and
    ``G``; ``max_residual`` is the round-trip error of reconstructing the
    original ``(f, g)`` from the quadrature factors.
    """
    roots = families.singularity_scan(p, grid)
    if roots:
        raise SingularDenominator(roots)
    coeffs = families.coefficients(p)
    sol = alpha_numeric(coeffs, families.seed(p), families.numeric_lambda(p, grid.t0), grid)
    numeric = partner_coefficients(coeffs, sol)
    closed = families.partner_ode(p)
    t = grid.samples
    dev = max(np.max(np.abs(numeric.F.values - closed.F(t))),
              np.max(np.abs(numeric.G.values - closed.G(t))))
    back = reconstruct_fg(sol)
    f_ref = sample(coeffs.f, grid).values
    g_ref = sample(coeffs.g, grid).values
    rt = max(np.max(np.abs(back.f.values - f_ref)), np.max(np.abs(back.g.values - g_ref)))
    return VerificationReport(max_residual=float(rt), max_deviation=float(dev),
                              derivatives="finite-difference")
