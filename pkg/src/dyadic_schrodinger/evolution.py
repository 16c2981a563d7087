"""The semigroup ``u(t) = exp(-i t D^beta) u0`` in Haar coordinates.

Level ``j`` oscillates with frequency ``omega_j = 2**(j beta)``; the phase
``exp(-i t omega_j)`` makes ``i du/dt = D^beta u`` hold exactly.  Norms of
differences are taken in coefficient space using the exact Besov weights,
so they coincide with the quadrature norms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .besov import level_weights
from .exceptions import PreconditionError
from .grid import BesovParams, GridFunction
from .haar import HaarCoefficients, analyze, synthesize

__all__ = [
    "EvolutionState",
    "frequencies",
    "evolve",
    "coefficient_besov_norm",
    "besov_continuity_modulus",
    "pde_residual",
    "pde_residual_function",
    "evolve_pointwise",
    "trajectory",
]


def frequencies(resolution: int, beta: float) -> np.ndarray:
    return 2.0 ** (beta * np.arange(resolution))


def _require_mean_zero(c: HaarCoefficients, atol: float = 0.0):
    if not c.has_zero_coarse(atol):
        raise PreconditionError("evolution is defined for initial data with P0 u0 = 0")


def evolve(c0: HaarCoefficients, beta: float, t: float, atol: float = 0.0) -> HaarCoefficients:
    """Multiply level ``j`` by ``exp(-i t 2**(j beta))``."""
    _require_mean_zero(c0, atol)
    return c0.map_levels(np.exp(-1j * t * frequencies(c0.resolution, beta)))


def coefficient_besov_norm(c: HaarCoefficients, lam: float) -> float:
    """Besov norm of the function with detail coefficients ``c`` (coarse ignored)."""
    w = 1.0 + level_weights(c.resolution, lam)
    return math.sqrt(float(sum(wj * np.sum(np.abs(d) ** 2) for wj, d in zip(w, c.detail))))


@dataclass(frozen=True)
class EvolutionState:
    params: BesovParams
    initial: HaarCoefficients
    time: float = 0.0

    def __post_init__(self):
        if self.time < 0:
            raise PreconditionError("time must be non-negative")
        _require_mean_zero(self.initial, 1e-14)

    def coefficients(self) -> HaarCoefficients:
        return evolve(self.initial, self.params.beta, self.time, atol=1e-14)

    def advance(self, dt: float) -> "EvolutionState":
        return EvolutionState(self.params, self.initial, self.time + dt)

    def function(self) -> GridFunction:
        return synthesize(self.coefficients())


def besov_continuity_modulus(c0: HaarCoefficients, params: BesovParams, t: float, s: float) -> float:
    """``||u(t) - u(s)||`` in the Besov norm of order ``params.lam``."""
    _require_mean_zero(c0)
    omega = frequencies(c0.resolution, params.beta)
    factor = np.exp(-1j * t * omega) - np.exp(-1j * s * omega)
    return coefficient_besov_norm(c0.map_levels(factor), params.lam)


def _residual_factors(omega: np.ndarray, t: float, h: float) -> np.ndarray:
    return np.exp(-1j * t * omega) * ((np.exp(-1j * h * omega) - 1.0) / h + 1j * omega)


def pde_residual(c0: HaarCoefficients, params: BesovParams, t: float, h: float) -> float:
    """Besov norm of order ``lam - beta`` of ``(u(t+h) - u(t))/h + i D^beta u(t)``."""
    _require_mean_zero(c0)
    if params.lam <= params.beta:
        raise PreconditionError("residual norm needs lambda > beta")
    if h == 0 or t + h < 0 or t < 0:
        raise PreconditionError("need t >= 0, t + h >= 0 and h != 0")
    omega = frequencies(c0.resolution, params.beta)
    return coefficient_besov_norm(c0.map_levels(_residual_factors(omega, t, h)), params.gap)


def pde_residual_function(c0: HaarCoefficients, params: BesovParams, t: float, h: float) -> GridFunction:
    """The residual itself as a grid function (for quadrature cross-checks)."""
    _require_mean_zero(c0)
    omega = frequencies(c0.resolution, params.beta)
    return synthesize(c0.map_levels(_residual_factors(omega, t, h)))


def evolve_pointwise(f0: GridFunction, params: BesovParams | float, t: float) -> GridFunction:
    """``u(t)`` on the grid.  ``params`` may be a :class:`BesovParams` or just beta."""
    beta = params.beta if isinstance(params, BesovParams) else float(params)
    c0 = analyze(f0)
    return synthesize(evolve(c0, beta, t, atol=1e-12 * max(f0.scale, 1e-300)))


def trajectory(c0: HaarCoefficients, params: BesovParams, times, h: float = 1e-4) -> np.ndarray:
    """Rows ``(t, L2 norm, Besov norm, PDE residual)`` for each ``t``."""
    rows = []
    for t in times:
        ct = evolve(c0, params.beta, t)
        l2 = math.sqrt(ct.energy())
        rows.append((t, l2, coefficient_besov_norm(ct, params.lam), pde_residual(c0, params, t, h)))
    return np.array(rows)
