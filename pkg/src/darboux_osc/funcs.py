"""Uniform grids, cumulative quadrature and finite differences.

These are the independent numerical oracles that every closed form in the
package is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "TimeGrid",
    "SampledField",
    "make_grid",
    "sample",
    "cumulative_integral",
    "central_derivative",
]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling ``t0 + k*step`` for ``k = 0..n-1`` of ``[t0, t1]``."""

    t0: float
    t1: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.t0) and np.isfinite(self.t1)):
            raise ValueError("grid limits must be finite")
        if self.t1 <= self.t0:
            raise ValueError(f"need t1 > t0, got t0={self.t0}, t1={self.t1}")
        if int(self.n) != self.n or self.n < 3:
            raise ValueError(f"need an integer sample count n >= 3, got {self.n}")

    @property
    def step(self) -> float:
        return (self.t1 - self.t0) / (self.n - 1)

    @property
    def samples(self) -> np.ndarray:
        t = self.t0 + np.arange(self.n) * self.step
        t[-1] = self.t1
        return t

    def index_of(self, t: float, rtol: float = 1e-9) -> int:
        """Index of the sample equal to ``t``; raises if ``t`` is off-grid."""
        k = int(round((t - self.t0) / self.step))
        if not 0 <= k < self.n or abs(self.samples[k] - t) > rtol * max(1.0, abs(t)):
            raise ValueError(f"t={t!r} is not a sample of {self}")
        return k


@dataclass(frozen=True)
class SampledField:
    """Complex values of a scalar function of time on a :class:`TimeGrid`."""

    grid: TimeGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n,):
            raise ValueError(
                f"expected {self.grid.n} values, got shape {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def t(self) -> np.ndarray:
        return self.grid.samples

    def at(self, t: float) -> complex:
        return complex(self.values[self.grid.index_of(t)])

    def __call__(self, t):
        """Look up values at grid samples; off-grid times raise ``ValueError``."""
        if np.ndim(t) == 0:
            return self.at(float(t))
        return np.array([self.values[self.grid.index_of(x)] for x in np.ravel(t)],
                        dtype=complex).reshape(np.shape(t))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def _combine(self, other, op):
        if isinstance(other, SampledField):
            if other.grid != self.grid:
                raise ValueError("fields live on different grids")
            other = other.values
        return SampledField(self.grid, op(self.values, other))

    def __add__(self, other):
        return self._combine(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __mul__(self, other):
        return self._combine(other, np.multiply)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._combine(other, np.divide)

    def __rtruediv__(self, other):
        return SampledField(self.grid, np.divide(other, self.values))

    def __neg__(self):
        return SampledField(self.grid, -self.values)


def make_grid(t0: float, t1: float, n: int) -> TimeGrid:
    return TimeGrid(float(t0), float(t1), int(n))


def sample(func: Callable[[np.ndarray], np.ndarray], grid: TimeGrid) -> SampledField:
    """Evaluate a vectorised ``func(t)`` on every grid sample."""
    values = np.broadcast_to(np.asarray(func(grid.samples), dtype=complex), (grid.n,))
    return SampledField(grid, values)


def cumulative_integral(f: SampledField) -> SampledField:
    """Running integral ``Phi(t_k) = int_{t0}^{t_k} f``.

    Each subinterval is integrated exactly for the quadratic through three
    neighbouring samples. Subintervals are paired so that ``Phi`` at even
    indices is the composite Simpson sum; when the panel count is odd the
    closing subinterval uses the backward stencil. Error is O(step**4).
    """
    y = f.values
    if not np.all(np.isfinite(y)):
        raise ValueError("integrand is not finite on the grid")
    h = f.grid.step
    n = y.size
    # forward stencil on [x_k, x_{k+1}] using x_k, x_{k+1}, x_{k+2}
    fwd = h / 12.0 * (5.0 * y[:-2] + 8.0 * y[1:-1] - y[2:])
    # backward stencil on [x_{k+1}, x_{k+2}] using x_k, x_{k+1}, x_{k+2}
    bwd = h / 12.0 * (-y[:-2] + 8.0 * y[1:-1] + 5.0 * y[2:])
    pieces = np.empty(n - 1, dtype=complex)
    pieces[0::2] = fwd[0::2] if n % 2 == 1 else np.append(fwd[0::2], bwd[-1])
    pieces[1::2] = bwd[0::2]
    out = np.empty(n, dtype=complex)
    out[0] = 0.0
    np.cumsum(pieces, out=out[1:])
    return SampledField(f.grid, out)


def central_derivative(f: SampledField, order: int = 2) -> SampledField:
    """Central differences of ``order`` 2 or 4 with one-sided stencils of the same order at the ends."""
    if not f.is_finite():
        raise ValueError("field is not finite on the grid")
    h = f.grid.step
    if order == 2:
        return SampledField(f.grid, np.gradient(f.values, h, edge_order=2))
    if order != 4:
        raise ValueError(f"order must be 2 or 4, got {order}")
    v = f.values
    if v.size < 5:
        raise ValueError("fourth-order differences need at least 5 samples")
    d = np.empty_like(v)
    d[2:-2] = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / (12 * h)
    fwd0 = np.array([-25, 48, -36, 16, -3]) / (12 * h)
    fwd1 = np.array([-3, -10, 18, -6, 1]) / (12 * h)
    d[0], d[1] = fwd0 @ v[:5], fwd1 @ v[:5]
    d[-1], d[-2] = -(fwd0 @ v[::-1][:5]), -(fwd1 @ v[::-1][:5])
    return SampledField(f.grid, d)
