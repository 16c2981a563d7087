"""Haar analysis and synthesis of grid functions.

The Haar function of ``I`` is ``|I|**-1/2`` on the left half of ``I`` and
``-|I|**-1/2`` on the right half.  A grid function of resolution ``J`` on
``[0, L)`` is exactly the sum of its unit-interval means (the P0 part) and its
Haar components on levels ``0 .. J-1``.  Both transforms are the usual
pairwise-average cascade and cost O(n).
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .dyadic import DyadicInterval, GridPoint
from .exceptions import FormatError, ResolutionError
from .grid import GridFunction, is_power_of_two

__all__ = [
    "HaarCoefficients",
    "haar_eval",
    "haar_function",
    "analyze",
    "synthesize",
    "partial_sum",
    "level_contributions",
    "read_coefficients_csv",
    "write_coefficients_csv",
]

_HEADER = "# haarcoeffs v1 J={J} L={L}"


@dataclass(frozen=True, eq=False)
class HaarCoefficients:
    """Haar coefficients of a grid function.

    ``coarse[u]`` is the mean over the unit interval ``[u, u+1)``.
    ``detail[j][k - 1]`` is the inner product with the Haar function of
    ``I(j, k)``, for ``0 <= j < resolution``; arrays are stored level-major.
    """

    resolution: int
    domain_length: int
    coarse: np.ndarray
    detail: tuple

    def __post_init__(self):
        L, J = self.domain_length, self.resolution
        coarse = np.array(self.coarse, dtype=np.complex128).reshape(-1)
        if coarse.size != L:
            raise ValueError(f"expected {L} coarse values, got {coarse.size}")
        detail = tuple(np.array(d, dtype=np.complex128).reshape(-1) for d in self.detail)
        if len(detail) != J:
            raise ValueError(f"expected {J} detail levels, got {len(detail)}")
        for j, d in enumerate(detail):
            if d.size != L << j:
                raise ValueError(f"level {j} needs {L << j} coefficients, got {d.size}")
            d.setflags(write=False)
        coarse.setflags(write=False)
        object.__setattr__(self, "coarse", coarse)
        object.__setattr__(self, "detail", detail)

    @classmethod
    def zeros(cls, resolution: int, domain_length: int = 1) -> "HaarCoefficients":
        return cls(
            resolution,
            domain_length,
            np.zeros(domain_length),
            [np.zeros(domain_length << j) for j in range(resolution)],
        )

    @classmethod
    def from_dict(cls, resolution: int, domain_length: int, entries: dict, coarse=None) -> "HaarCoefficients":
        """Build from ``{(j, k): value}`` (positions are 1-based)."""
        detail = [np.zeros(domain_length << j, dtype=np.complex128) for j in range(resolution)]
        for (j, k), v in entries.items():
            if not 0 <= j < resolution:
                raise ResolutionError(f"level {j} outside 0..{resolution - 1}")
            detail[j][k - 1] = v
        if coarse is None:
            coarse = np.zeros(domain_length)
        return cls(resolution, domain_length, coarse, detail)

    def __getitem__(self, key: tuple[int, int]) -> complex:
        j, k = key
        if k < 1:
            raise IndexError("positions are 1-based")
        return complex(self.detail[j][k - 1])

    def items(self) -> Iterator[tuple[DyadicInterval, complex]]:
        for j, d in enumerate(self.detail):
            for k, v in enumerate(d, start=1):
                yield DyadicInterval(j, k), complex(v)

    def flat_detail(self) -> np.ndarray:
        if not self.detail:
            return np.zeros(0, dtype=np.complex128)
        return np.concatenate(self.detail)

    def levels(self) -> np.ndarray:
        """Level index of every entry of :meth:`flat_detail`."""
        return np.concatenate(
            [np.full(self.domain_length << j, j) for j in range(self.resolution)]
        ) if self.resolution else np.zeros(0, dtype=int)

    def energy(self) -> float:
        """``sum |coarse|**2 + sum |detail|**2``; equals the squared L2 norm."""
        total = float(np.sum(np.abs(self.coarse) ** 2))
        for d in self.detail:
            total += float(np.sum(np.abs(d) ** 2))
        return total

    def has_zero_coarse(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coarse) <= atol))

    def map_levels(self, multipliers: Sequence[complex]) -> "HaarCoefficients":
        """Multiply level ``j`` by ``multipliers[j]``; the coarse part is kept."""
        return HaarCoefficients(
            self.resolution,
            self.domain_length,
            self.coarse,
            [d * m for d, m in zip(self.detail, multipliers)],
        )

    def truncate(self, max_level: int) -> "HaarCoefficients":
        """Drop the coarse part and every level above ``max_level``."""
        keep = [1.0 if j <= max_level else 0.0 for j in range(self.resolution)]
        return HaarCoefficients(
            self.resolution,
            self.domain_length,
            np.zeros(self.domain_length),
            [d * m for d, m in zip(self.detail, keep)],
        )

    def _check(self, other: "HaarCoefficients"):
        if (self.resolution, self.domain_length) != (other.resolution, other.domain_length):
            raise ValueError("coefficient sets live on different grids")

    def __add__(self, other: "HaarCoefficients") -> "HaarCoefficients":
        self._check(other)
        return HaarCoefficients(
            self.resolution,
            self.domain_length,
            self.coarse + other.coarse,
            [a + b for a, b in zip(self.detail, other.detail)],
        )

    def __sub__(self, other: "HaarCoefficients") -> "HaarCoefficients":
        return self + other * -1.0

    def __mul__(self, a: complex) -> "HaarCoefficients":
        return HaarCoefficients(
            self.resolution, self.domain_length, self.coarse * a, [d * a for d in self.detail]
        )

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"HaarCoefficients(J={self.resolution}, L={self.domain_length})"


def haar_eval(interval: DyadicInterval, x: GridPoint) -> float:
    """Value of the Haar function of ``interval`` on the cell of ``x``."""
    j, J = interval.level, x.resolution
    if J <= j:
        # a cell this coarse either misses the interval or covers both halves
        if interval.ancestor(J).position - 1 == x.cell:
            raise ResolutionError(f"cell {x.cell} at resolution {J} straddles the halves of {interval!r}")
        return 0.0
    lo, hi = interval.cell_range(J)
    if not lo <= x.cell < hi:
        return 0.0
    amp = 2.0 ** (j / 2)
    return amp if x.cell < (lo + hi) // 2 else -amp


def haar_function(interval: DyadicInterval, resolution: int, domain_length: int = 1) -> GridFunction:
    """The Haar function of ``interval`` sampled on a grid (needs ``resolution > level``)."""
    if resolution <= interval.level:
        raise ResolutionError(
            f"Haar function of level {interval.level} is not a grid function at resolution {resolution}"
        )
    lo, hi = interval.cell_range(resolution)
    n = domain_length << resolution
    if hi > n:
        raise ResolutionError(f"{interval!r} is not inside [0, {domain_length})")
    values = np.zeros(n)
    mid = (lo + hi) // 2
    amp = 2.0 ** (interval.level / 2)
    values[lo:mid] = amp
    values[mid:hi] = -amp
    return GridFunction(resolution, domain_length, values)


def analyze(f: GridFunction) -> HaarCoefficients:
    """Exact Haar coefficients of a grid function (pairwise-average cascade)."""
    J, L = f.resolution, f.domain_length
    avg = np.array(f.values, dtype=np.complex128)
    detail = [None] * J
    for j in range(J - 1, -1, -1):
        pairs = avg.reshape(-1, 2)
        # <f, h_I> = |I|**(1/2) (mean on left half - mean on right half) / 2
        detail[j] = (pairs[:, 0] - pairs[:, 1]) * (0.5 * 2.0 ** (-j / 2))
        avg = 0.5 * (pairs[:, 0] + pairs[:, 1])
    return HaarCoefficients(J, L, avg, detail)


def synthesize(c: HaarCoefficients) -> GridFunction:
    """Inverse of :func:`analyze`."""
    avg = np.array(c.coarse, dtype=np.complex128)
    for j in range(c.resolution):
        step = c.detail[j] * 2.0 ** (j / 2)
        nxt = np.empty(2 * avg.size, dtype=np.complex128)
        nxt[0::2] = avg + step
        nxt[1::2] = avg - step
        avg = nxt
    return GridFunction(c.resolution, c.domain_length, avg)


def partial_sum(c: HaarCoefficients, N: int) -> GridFunction:
    """Synthesis of the levels ``0 .. min(N, J-1)`` only, without the coarse part.

    For ``N >= 0`` this is ``P_N f - P_0 f``, the difference of the
    conditional expectations on level-``N+1`` and level-0 intervals.
    """
    return synthesize(c.truncate(N))


def level_contributions(c: HaarCoefficients) -> np.ndarray:
    """Array of shape ``(J, n)`` whose row ``j`` is ``sum_k c[j, k] h_(j,k)`` on the grid."""
    J = c.resolution
    n = c.domain_length << J
    out = np.zeros((J, n), dtype=np.complex128)
    for j in range(J):
        half = 1 << (J - j - 1)
        amp = c.detail[j] * 2.0 ** (j / 2)
        signed = np.stack([amp, -amp], axis=1).reshape(-1)
        out[j] = np.repeat(signed, half)
    return out


def write_coefficients_csv(c: HaarCoefficients, path) -> None:
    lines = [_HEADER.format(J=c.resolution, L=c.domain_length)]
    for u, v in enumerate(c.coarse, start=1):
        lines.append(f"-1,{u},{v.real:.17g},{v.imag:.17g}")
    for j, d in enumerate(c.detail):
        for k, v in enumerate(d, start=1):
            lines.append(f"{j},{k},{v.real:.17g},{v.imag:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_coefficients_csv(path) -> HaarCoefficients:
    rows = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not rows:
        raise FormatError(f"{path}: empty file")
    parts = rows[0].split()
    try:
        if parts[:3] != ["#", "haarcoeffs", "v1"]:
            raise ValueError
        J = int(parts[3].removeprefix("J="))
        L = int(parts[4].removeprefix("L="))
    except (IndexError, ValueError) as exc:
        raise FormatError(f"{path}: malformed header {rows[0]!r}") from exc
    if J < 0 or not is_power_of_two(L):
        raise FormatError(f"{path}: bad grid J={J} L={L}")
    coarse = np.zeros(L, dtype=np.complex128)
    detail = [np.zeros(L << j, dtype=np.complex128) for j in range(J)]
    seen = 0
    for row in rows[1:]:
        try:
            j_s, k_s, re_s, im_s = row.split(",")
            j, k, v = int(j_s), int(k_s), complex(float(re_s), float(im_s))
        except ValueError as exc:
            raise FormatError(f"{path}: bad row {row!r}") from exc
        target = coarse if j == -1 else (detail[j] if 0 <= j < J else None)
        if target is None or not 1 <= k <= target.size:
            raise FormatError(f"{path}: entry ({j}, {k}) outside the grid")
        target[k - 1] = v
        seen += 1
    if seen != L * (1 << J):
        raise FormatError(f"{path}: expected {L << J} rows, found {seen}")
    return HaarCoefficients(J, L, coarse, detail)
