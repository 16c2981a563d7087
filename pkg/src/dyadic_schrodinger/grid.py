"""Piecewise-constant grid functions on ``[0, L)`` and sample generators."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import FormatError, PreconditionError

__all__ = [
    "GridFunction",
    "BesovParams",
    "is_power_of_two",
    "project_P0",
    "generate_besov_sample",
    "generate_lipschitz_sample",
    "counterexample_term",
    "read_csv",
    "write_csv",
]

_HEADER = re.compile(r"^#\s*gridfunction\s+v1\s+J=(-?\d+)\s+L=(-?\d+)\s*$")


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex function constant on each cell ``[i 2**-J, (i+1) 2**-J)`` of ``[0, L)``.

    ``values`` is stored as a read-only complex array of length ``L * 2**J``.
    """

    resolution: int
    domain_length: int
    values: np.ndarray

    def __post_init__(self):
        if self.resolution < 0:
            raise ValueError("resolution must be non-negative")
        if not is_power_of_two(self.domain_length):
            raise ValueError(f"domain length must be a power of two, got {self.domain_length}")
        vals = np.array(self.values, dtype=np.complex128).reshape(-1)
        if vals.size != self.domain_length << self.resolution:
            raise ValueError(
                f"expected {self.domain_length << self.resolution} values, got {vals.size}"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def zeros(cls, resolution: int, domain_length: int = 1) -> "GridFunction":
        return cls(resolution, domain_length, np.zeros(domain_length << resolution))

    @classmethod
    def from_callable(cls, func, resolution: int, domain_length: int = 1) -> "GridFunction":
        """Sample ``func`` at cell midpoints."""
        n = domain_length << resolution
        mid = (np.arange(n) + 0.5) * 2.0**-resolution
        return cls(resolution, domain_length, func(mid))

    @property
    def n_cells(self) -> int:
        return self.values.size

    @property
    def cell_width(self) -> float:
        return math.ldexp(1.0, -self.resolution)

    @property
    def scale(self) -> float:
        """Largest cell magnitude; the reference scale for tolerances."""
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.cell_width))

    def unit_blocks(self) -> np.ndarray:
        """Values reshaped to ``(L, 2**J)``: one row per unit interval."""
        return self.values.reshape(self.domain_length, -1)

    def unit_means(self) -> np.ndarray:
        return self.unit_blocks().mean(axis=1)

    def mean_zero_per_unit(self, rtol: float = 1e-12) -> bool:
        sums = np.abs(self.unit_blocks().sum(axis=1))
        return bool(np.all(sums <= rtol * max(self.scale, 1e-300) * (1 << self.resolution)))

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.resolution, self.domain_length, values)

    def _check_compatible(self, other: "GridFunction"):
        if (self.resolution, self.domain_length) != (other.resolution, other.domain_length):
            raise ValueError("grid functions live on different grids")

    def __add__(self, other: "GridFunction") -> "GridFunction":
        self._check_compatible(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        self._check_compatible(other)
        return self.with_values(self.values - other.values)

    def __mul__(self, a: complex) -> "GridFunction":
        return self.with_values(self.values * a)

    __rmul__ = __mul__

    def __neg__(self) -> "GridFunction":
        return self.with_values(-self.values)

    def __repr__(self) -> str:
        return f"GridFunction(J={self.resolution}, L={self.domain_length}, n={self.n_cells})"


@dataclass(frozen=True)
class BesovParams:
    """Smoothness ``lam`` of the initial data and order ``beta`` of the operator.

    Requires ``0 < beta < lam < 1``.
    """

    lam: float
    beta: float

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise PreconditionError(f"lambda must lie in (0, 1), got {self.lam}")
        if not 0.0 < self.beta < 1.0:
            raise PreconditionError(f"beta must lie in (0, 1), got {self.beta}")
        if not self.beta < self.lam:
            raise PreconditionError(f"need beta < lambda, got beta={self.beta}, lambda={self.lam}")

    @property
    def c_lambda(self) -> float:
        return 2.0 / (2.0 ** (2 * self.lam) - 1.0)

    @property
    def gap(self) -> float:
        return self.lam - self.beta

    @property
    def c_max(self) -> float:
        """``2 sum_j 2**(-(lam - beta) j) = 2**(gap+1) / (2**gap - 1)``."""
        return 2.0 ** (self.gap + 1) / (2.0**self.gap - 1.0)


def project_P0(f: GridFunction) -> GridFunction:
    """Replace ``f`` on each unit interval by its mean there."""
    means = f.unit_means()
    return f.with_values(np.repeat(means, 1 << f.resolution))


def generate_besov_sample(
    resolution: int,
    domain_length: int = 1,
    lambda_target: float = 0.5,
    seed: int = 0,
    per_level: int = 1,
) -> GridFunction:
    """Mean-zero grid function with Haar coefficients ``+-2**(-j (lambda_target + 1))``.

    ``per_level`` coefficients are placed at random positions on every level
    ``0 <= j < resolution`` of every unit interval, with independent random
    signs.  Hence ``sum |c_I|**2 |I|**(-2 lam)`` is bounded by
    ``per_level * L / (1 - 2**(-2 (lambda_target - lam + 1)))`` for every lam.
    """
    from .haar import HaarCoefficients, synthesize

    rng = np.random.default_rng(seed)
    coeffs = HaarCoefficients.zeros(resolution, domain_length)
    detail = [d.copy() for d in coeffs.detail]
    for j in range(resolution):
        per_unit = 1 << j
        count = min(per_level, per_unit)
        amp = 2.0 ** (-j * (lambda_target + 1.0))
        for unit in range(domain_length):
            pos = rng.choice(per_unit, size=count, replace=False)
            signs = rng.choice([-1.0, 1.0], size=count)
            detail[j][unit * per_unit + pos] = signs * amp
    return synthesize(HaarCoefficients(resolution, domain_length, coeffs.coarse, detail))


def generate_lipschitz_sample(
    resolution: int,
    domain_length: int = 1,
    slope_bound: float = 1.0,
    seed: int = 0,
    knots_per_unit: int = 8,
) -> tuple[GridFunction, float]:
    """Sample a random piecewise-linear function at cell midpoints, minus its P0 part.

    Slopes are drawn uniformly from ``[-slope_bound, slope_bound]`` on
    ``knots_per_unit`` equal pieces per unit interval.  Returns the grid
    function and the sup of ``|g'|`` actually used.
    """
    rng = np.random.default_rng(seed)
    n_pieces = knots_per_unit * domain_length
    slopes = rng.uniform(-slope_bound, slope_bound, size=n_pieces)
    knots = np.linspace(0.0, domain_length, n_pieces + 1)
    heights = np.concatenate([[0.0], np.cumsum(slopes * np.diff(knots))])
    mid = (np.arange(domain_length << resolution) + 0.5) * 2.0**-resolution
    g = GridFunction(resolution, domain_length, np.interp(mid, knots, heights))
    lip = float(np.max(np.abs(slopes))) if n_pieces else 0.0
    return g - project_P0(g), lip


def counterexample_term(n: int, resolution: int) -> GridFunction:
    """``2**(-j/2) h`` for the ``(n - 2**j + 1)``-th Haar function of level ``j``,
    where ``2**j <= n < 2**(j+1)``.

    Its L2 norm is ``2**(-j/2)`` while its sup norm stays 1.
    """
    if n < 1:
        raise ValueError("n must be positive")
    j = n.bit_length() - 1
    if j >= resolution:
        raise PreconditionError(f"level {j} needs resolution > {j}")
    # 2**(-j/2) * 2**(j/2) is exactly 1; build the values directly so sup |f_n| = 1 holds bitwise
    k = n - (1 << j)
    size = 1 << (resolution - j)
    values = np.zeros(1 << resolution)
    values[k * size : k * size + size // 2] = 1.0
    values[k * size + size // 2 : (k + 1) * size] = -1.0
    return GridFunction(resolution, 1, values)


def write_csv(f: GridFunction, path) -> None:
    lines = [f"# gridfunction v1 J={f.resolution} L={f.domain_length}"]
    lines += [f"{i},{v.real:.17g},{v.imag:.17g}" for i, v in enumerate(f.values)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path) -> GridFunction:
    text = Path(path).read_text()
    rows = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not rows:
        raise FormatError(f"{path}: empty file")
    m = _HEADER.match(rows[0])
    if m is None:
        raise FormatError(f"{path}: malformed header {rows[0]!r}")
    J, L = int(m.group(1)), int(m.group(2))
    if J < 0:
        raise FormatError(f"{path}: negative resolution")
    if not is_power_of_two(L):
        raise FormatError(f"{path}: domain length {L} is not a power of two")
    body = rows[1:]
    if len(body) != L << J:
        raise FormatError(f"{path}: expected {L << J} rows, found {len(body)}")
    values = np.empty(len(body), dtype=np.complex128)
    for expected, row in enumerate(body):
        parts = row.split(",")
        if len(parts) != 3:
            raise FormatError(f"{path}: bad row {row!r}")
        try:
            idx = int(parts[0])
            values[expected] = complex(float(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise FormatError(f"{path}: bad row {row!r}") from exc
        if idx != expected:
            raise FormatError(f"{path}: row index {idx} out of order (expected {expected})")
    return GridFunction(J, L, values)
