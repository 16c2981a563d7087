"""Maximal operators controlling pointwise convergence of the modulated Haar series.

``S^N_t f(x) = sum_{j <= N} exp(i t 2**(j beta)) sum_k <f, h_jk> h_jk(x)``.
The phase sign here is the opposite of :func:`evolution.evolve`; the two
series are complex conjugates of each other level by level, which leaves
every modulus-based quantity below unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import PreconditionError
from .grid import BesovParams, GridFunction
from .haar import HaarCoefficients, analyze, level_contributions

__all__ = [
    "hardy_littlewood_dyadic",
    "sharp_maximal_dyadic",
    "sharp_maximal_grid",
    "oscillatory_partial_sum",
    "oscillatory_partial_sums",
    "star_maximal",
    "star_t_maximal",
    "default_t_grid",
    "rate_constant",
    "RateBoundResult",
    "convergence_rate_bound",
    "lipschitz_cauchy_violations",
]


def default_t_grid(points: int = 512) -> np.ndarray:
    """``points`` equispaced times strictly inside ``(0, 1)``."""
    return np.arange(1, points + 1) / (points + 1)


def hardy_littlewood_dyadic(f: GridFunction) -> np.ndarray:
    """Max over dyadic intervals of levels ``0..J`` containing each cell of the mean of ``|f|``."""
    J = f.resolution
    a = np.abs(f.values)
    best = a.copy()
    for j in range(J - 1, -1, -1):
        size = 1 << (J - j)
        means = a.reshape(-1, size).mean(axis=1)
        np.maximum(best, np.repeat(means, size), out=best)
    return best


def sharp_maximal_dyadic(f: GridFunction, lam: float) -> np.ndarray:
    """``sup_I |I|**-(1+lam) int_I |f(y) - f(x)| dy`` over dyadic ``I`` of levels ``0..J`` containing ``x``."""
    J = f.resolution
    v = f.values
    w = f.cell_width
    best = np.zeros(v.size)
    for j in range(J):
        size = 1 << (J - j)
        blocks = v.reshape(-1, size)
        # integral over the block of |f(y) - f(x)| for each x in the block
        osc = np.abs(blocks[:, :, None] - blocks[:, None, :]).sum(axis=2) * w
        length = 2.0**-j
        np.maximum(best, osc.reshape(-1) / length ** (1 + lam), out=best)
    return best


def sharp_maximal_grid(f: GridFunction, lam: float) -> np.ndarray:
    """Sup over all grid-aligned intervals ``[a, b)`` of ``[0, L)`` containing the cell.

    A lower bound for the continuum sup over arbitrary intervals.  Costs
    O(n**2) per cell, O(n**3) overall; meant for ``n`` up to a few hundred.
    """
    v = f.values
    n = v.size
    w = f.cell_width
    best = np.zeros(n)
    starts = np.arange(n + 1)
    for i in range(n):
        prefix = np.concatenate([[0.0], np.cumsum(np.abs(v - v[i]))]) * w
        a = starts[: i + 1]
        b = starts[i + 1 :]
        integral = prefix[b][None, :] - prefix[a][:, None]
        length = (b[None, :] - a[:, None]) * w
        best[i] = np.max(integral / length ** (1 + lam))
    return best


def _check_coarse(c: HaarCoefficients):
    if not c.has_zero_coarse(1e-12 * max(1.0, np.sqrt(c.energy()))):
        raise PreconditionError("maximal estimates are stated for P0 f = 0")


def oscillatory_partial_sums(c: HaarCoefficients, beta: float, t: float) -> np.ndarray:
    """Array ``(J, n)`` whose row ``N`` is ``S^N_t f`` on the grid."""
    contrib = level_contributions(c)
    phases = np.exp(1j * t * 2.0 ** (beta * np.arange(c.resolution)))
    return np.cumsum(contrib * phases[:, None], axis=0)


def oscillatory_partial_sum(c: HaarCoefficients, beta: float, t: float, N: int) -> GridFunction:
    """``S^N_t f``; ``N = -1`` is the empty sum and ``N >= J - 1`` the full series."""
    _check_coarse(c)
    n = c.domain_length << c.resolution
    if N < 0 or c.resolution == 0:
        return GridFunction(c.resolution, c.domain_length, np.zeros(n))
    sums = oscillatory_partial_sums(c, beta, t)
    return GridFunction(c.resolution, c.domain_length, sums[min(N, c.resolution - 1)])


def star_t_maximal(c: HaarCoefficients, beta: float, t: float, n_max: int | None = None) -> np.ndarray:
    """``max_{0 <= N <= n_max} |S^N_t f|`` per cell."""
    _check_coarse(c)
    if c.resolution == 0:
        return np.zeros(c.domain_length)
    top = c.resolution - 1 if n_max is None else min(n_max, c.resolution - 1)
    sums = oscillatory_partial_sums(c, beta, t)[: top + 1]
    return np.abs(sums).max(axis=0)


def star_maximal(c: HaarCoefficients, beta: float, t_grid, n_max: int | None = None) -> np.ndarray:
    """Max of :func:`star_t_maximal` over ``t_grid``; a lower bound of the sup over ``(0, 1)``."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0:
        raise PreconditionError("empty time grid")
    best = np.zeros(c.domain_length << c.resolution)
    for t in t_grid:
        np.maximum(best, star_t_maximal(c, beta, t, n_max), out=best)
    return best


def rate_constant(params: BesovParams) -> float:
    """``2 * 2**gap / (1 - 2**-gap)`` with ``gap = lam - beta``."""
    g = params.gap
    return 2.0 * 2.0**g / (1.0 - 2.0**-g)


@dataclass
class RateBoundResult:
    lhs: np.ndarray
    rhs: np.ndarray
    violations: int
    max_violation: float
    ratios: np.ndarray

    @property
    def passed(self) -> bool:
        return self.violations == 0


def convergence_rate_bound(f0: GridFunction, params: BesovParams, t_grid, slack: float = 1e-12) -> RateBoundResult:
    """Compare ``sup_t |u(t)(x) - u0(x)| / t`` with ``rate_constant * M#_lam u0(x)`` per cell.

    ``u(t)`` is the full modulated series.  A cell violates the bound when
    ``lhs > rhs + slack * (1 + rhs)``.
    """
    if not f0.mean_zero_per_unit():
        raise PreconditionError("rate bound needs P0 u0 = 0")
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0 or np.any(t_grid <= 0):
        raise PreconditionError("time grid must be non-empty and positive")
    c = analyze(f0)
    base = f0.values
    lhs = np.zeros(base.size)
    if f0.resolution > 0:
        contrib = level_contributions(c)
        omega = 2.0 ** (params.beta * np.arange(f0.resolution))
        for t in t_grid:
            # u(t) - u0 = sum_j (exp(i t w_j) - 1) * level_j
            diff = ((np.exp(1j * t * omega) - 1.0)[:, None] * contrib).sum(axis=0)
            np.maximum(lhs, np.abs(diff) / t, out=lhs)
    rhs = rate_constant(params) * sharp_maximal_dyadic(f0, params.lam)
    excess = lhs - rhs - slack * (1.0 + rhs)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(rhs > 0, lhs / np.where(rhs > 0, rhs, 1.0), 0.0)
    return RateBoundResult(
        lhs=lhs,
        rhs=rhs,
        violations=int(np.sum(excess > 0)),
        max_violation=float(max(0.0, excess.max())) if excess.size else 0.0,
        ratios=ratios,
    )


def lipschitz_cauchy_violations(g: GridFunction, lip: float, beta: float, t_grid, slack: float = 1e-12) -> tuple[int, float]:
    """Check ``|S^N_t g - S^M_t g| <= lip * sum_{j=M+1}^{N} 2**-j`` for ``0 <= M <= N < J``.

    Returns the number of violating ``(t, M, N, cell)`` cases and the largest
    observed ratio of left to right side.
    """
    c = analyze(g)
    J = g.resolution
    violations = 0
    worst = 0.0
    tails = np.concatenate([[0.0], np.cumsum(2.0 ** -np.arange(1, J))])  # tails[m] = sum_{j=1}^m 2**-j
    for t in np.asarray(t_grid, dtype=float):
        sums = oscillatory_partial_sums(c, beta, t)
        for M in range(J):
            for N in range(M, J):
                bound = lip * (tails[N] - tails[M])
                diff = np.abs(sums[N] - sums[M])
                violations += int(np.sum(diff > bound + slack * (1.0 + bound)))
                if bound > 0:
                    worst = max(worst, float(diff.max() / bound))
    return violations, worst
