"""Dyadic intervals, the dyadic distance and the geometry of its level sets.

A dyadic interval ``I(j, k)`` is ``[(k - 1) 2**-j, k 2**-j)`` with ``k >= 1``.
Points are represented by cells of a uniform grid of width ``2**-J``; the
dyadic distance between two distinct cells is the length of the smallest
dyadic interval containing both, and it is the same for every pair of points
taken from those two cells.  Everything here is computed with powers of two
and exact integer arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .exceptions import PreconditionError, ResolutionError

__all__ = [
    "DyadicInterval",
    "GridPoint",
    "dyadic_distance",
    "delta_exponents",
    "delta_matrix",
    "level_set_pairs",
    "level_set_mask",
    "measure_B",
    "measure_B_cap_C",
    "cross_measure_sum",
    "unit_delta_power_integral",
    "unit_delta_power_bound",
    "intervals_up_to",
]


@dataclass(frozen=True, order=True)
class DyadicInterval:
    level: int
    position: int

    def __post_init__(self):
        if self.position < 1:
            raise ValueError(f"position must be >= 1, got {self.position}")

    @property
    def length(self) -> float:
        return math.ldexp(1.0, -self.level)

    @property
    def left(self) -> float:
        return math.ldexp(float(self.position - 1), -self.level)

    @property
    def right(self) -> float:
        return math.ldexp(float(self.position), -self.level)

    def left_half(self) -> "DyadicInterval":
        return DyadicInterval(self.level + 1, 2 * self.position - 1)

    def right_half(self) -> "DyadicInterval":
        return DyadicInterval(self.level + 1, 2 * self.position)

    def ancestor(self, level: int) -> "DyadicInterval":
        """The unique interval of ``level`` (<= own level) containing this one."""
        if level > self.level:
            raise ValueError("ancestor level must not exceed the interval level")
        shift = self.level - level
        return DyadicInterval(level, ((self.position - 1) >> shift) + 1)

    def contains(self, other: "DyadicInterval") -> bool:
        return other.level >= self.level and other.ancestor(self.level) == self

    def cell_range(self, resolution: int) -> tuple[int, int]:
        """Half-open range of grid cells at ``resolution`` covering the interval."""
        if resolution < self.level:
            raise ResolutionError(
                f"interval of level {self.level} is not a union of cells at resolution {resolution}"
            )
        width = 1 << (resolution - self.level)
        return (self.position - 1) * width, self.position * width

    def contains_cell(self, cell: int, resolution: int) -> bool:
        lo, hi = self.cell_range(resolution)
        return lo <= cell < hi

    @classmethod
    def containing_cell(cls, cell: int, resolution: int, level: int) -> "DyadicInterval":
        """The level-``level`` interval containing cell ``cell`` (level <= resolution)."""
        if level > resolution:
            raise ResolutionError("a cell is not contained in a finer dyadic interval")
        return cls(level, (cell >> (resolution - level)) + 1)

    def __repr__(self) -> str:
        return f"I(j={self.level}, k={self.position})"


def intervals_up_to(max_level: int, domain_length: int = 1, min_level: int = 0) -> Iterator[DyadicInterval]:
    """All dyadic intervals inside ``[0, domain_length)`` with levels in
    ``[min_level, max_level]``, level-major."""
    for j in range(min_level, max_level + 1):
        count = domain_length << j if j >= 0 else domain_length >> -j
        for k in range(1, count + 1):
            yield DyadicInterval(j, k)


@dataclass(frozen=True)
class GridPoint:
    resolution: int
    cell: int

    def __post_init__(self):
        if self.resolution < 0 or self.cell < 0:
            raise ValueError("resolution and cell index must be non-negative")

    @classmethod
    def from_real(cls, x: float, resolution: int) -> "GridPoint":
        return cls(resolution, int(math.floor(math.ldexp(x, resolution))))

    @property
    def left(self) -> float:
        return math.ldexp(float(self.cell), -self.resolution)


def _common_level(a: int, b: int, resolution: int) -> int:
    # largest j with a >> (J - j) == b >> (J - j); a != b
    return resolution - (a ^ b).bit_length()


def dyadic_distance(x: GridPoint, y: GridPoint) -> float:
    """Length of the smallest dyadic interval containing both points.

    Zero on the diagonal (same cell).  Always an exact power of two.
    """
    if x.resolution != y.resolution:
        raise ResolutionError(
            f"points live on different grids (J={x.resolution} vs J={y.resolution})"
        )
    if x.cell == y.cell:
        return 0.0
    return math.ldexp(1.0, -_common_level(x.cell, y.cell, x.resolution))


def delta_exponents(n_cells: int, resolution: int) -> np.ndarray:
    """Integer matrix ``e`` with ``delta = 2**e`` off the diagonal.

    The diagonal holds a sentinel (``-resolution - 1``) and must be masked
    by callers.
    """
    idx = np.arange(n_cells, dtype=np.int64)
    xor = idx[:, None] ^ idx[None, :]
    # frexp exponent of a positive integer is its bit length (exact below 2**53)
    _, bits = np.frexp(xor.astype(np.float64))
    bits = bits.astype(np.int64)
    bits[xor == 0] = -1
    return bits - resolution


def delta_matrix(n_cells: int, resolution: int) -> np.ndarray:
    """Dense matrix of dyadic distances between all pairs of cells; zero diagonal."""
    e = delta_exponents(n_cells, resolution)
    out = np.ldexp(1.0, e)
    np.fill_diagonal(out, 0.0)
    return out


def level_set_pairs(j: int, resolution: int, domain_length: int = 1) -> Iterator[tuple[int, int]]:
    """Cell pairs ``(a, b)`` with ``delta = 2**-j``, for ``0 <= j``.

    Enumerated interval by interval: for each level-``j`` interval inside
    ``[0, domain_length)``, first the pairs (left half, right half), then
    (right half, left half).  Levels ``j >= resolution`` give nothing, since
    their halves are finer than a cell.
    """
    if j < 0:
        raise ValueError("only non-negative levels are enumerated")
    if j >= resolution:
        return
    half = 1 << (resolution - j - 1)
    for k in range(domain_length << j):
        start = 2 * k * half
        left = range(start, start + half)
        right = range(start + half, start + 2 * half)
        for a in left:
            for b in right:
                yield a, b
        for b in right:
            for a in left:
                yield b, a


def level_set_mask(j: int, resolution: int, domain_length: int = 1) -> np.ndarray:
    """Boolean ``n x n`` indicator of the level set ``delta = 2**-j`` (any integer j)."""
    n = domain_length << resolution
    mask = delta_exponents(n, resolution) == -j
    np.fill_diagonal(mask, False)
    return mask


def measure_B(interval: DyadicInterval) -> float:
    """Area of ``(I+ x I-) u (I- x I+)``: two squares of side ``|I|/2``."""
    return math.ldexp(1.0, -2 * interval.level - 1)


def measure_B_cap_C(big: DyadicInterval, interval: DyadicInterval) -> float:
    """Area of ``B(big)`` intersected with the cross region ``C(interval)``.

    ``C(I)`` is the set of pairs with exactly one coordinate in ``I``.  For a
    strict ancestor ``big`` of ``I``, ``I`` sits in one half of ``big`` and the
    intersection is ``(I x other half) u (other half x I)``, of area
    ``|I| * |big|``.  Any other ``big`` gives zero.
    """
    if big.level < interval.level and big.contains(interval):
        return math.ldexp(1.0, -interval.level - big.level)
    return 0.0


def cross_measure_sum(interval: DyadicInterval, lam: float) -> float:
    """Closed form of ``sum_{j>=0} 2**(j(1+2 lam)) m(B(J_j) n C(I))``.

    Equals ``|I| (|I|**(-2 lam) - 1) / (2**(2 lam) - 1)``.
    """
    size = interval.length
    return size * (size ** (-2 * lam) - 1.0) / (2.0 ** (2 * lam) - 1.0)


def unit_delta_power_integral(alpha: float) -> float:
    """Integral of ``delta(x, y)**alpha`` over ``y`` in the unit interval of ``x``.

    Inside a unit interval the set ``{y : delta(x, y) = 2**-k}`` is the sibling
    half at level ``k + 1`` and has measure ``2**-(k+1)``, so the integral is
    ``sum_k 2**(-k alpha) 2**-(k+1) = 2**alpha / (2**(1+alpha) - 1)``.
    Independent of ``x``.
    """
    if alpha <= -1:
        raise PreconditionError(f"delta**alpha is not locally integrable for alpha={alpha} <= -1")
    return 2.0**alpha / (2.0 ** (1 + alpha) - 1.0)


def unit_delta_power_bound(alpha: float) -> float:
    """Upper bound for :func:`unit_delta_power_integral`.

    ``1 / (2**(1+alpha) - 1)`` for ``-1 < alpha <= 0``; for ``alpha > 0`` that
    expression drops below the true value and the trivial bound 1 is used.
    """
    if alpha <= -1:
        raise PreconditionError(f"delta**alpha is not locally integrable for alpha={alpha} <= -1")
    if alpha > 0:
        return 1.0
    return 1.0 / (2.0 ** (1 + alpha) - 1.0)
