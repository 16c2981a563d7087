"""Dyadic Besov seminorms computed by exact quadrature and from Haar coefficients.

The seminorm of order ``lam`` is the double integral of
``|f(x) - f(y)|**2 / delta(x, y)**(1 + 2 lam)`` over pairs in the same unit
interval.  For ``f`` in the span of Haar functions with ``|I| <= 1`` it
equals ``sum |<f, h_I>|**2 w(I)`` with the weight
``w(I) = (2 + c) |I|**(-2 lam) - c`` and ``c = 1 / (2**(2 lam) - 1)``.
"""
from __future__ import annotations

import math

import numpy as np

from .dyadic import DyadicInterval, delta_exponents, level_set_mask
from .exceptions import PreconditionError
from .grid import GridFunction
from .haar import HaarCoefficients, analyze

__all__ = [
    "cross_constant",
    "besov_weight",
    "level_weights",
    "seminorm_sq_quadrature",
    "seminorm_sq_coefficients",
    "besov_norm",
    "coefficient_norm",
    "equivalence_ratio",
    "equivalence_bracket",
    "polarized_quadrature",
    "level_integral",
]


def cross_constant(lam: float) -> float:
    """``1 / (2**(2 lam) - 1)``: the per-coefficient mass of the cross region."""
    return 1.0 / (2.0 ** (2 * lam) - 1.0)


def besov_weight(interval: DyadicInterval, lam: float) -> float:
    """``(2 + c) |I|**(-2 lam) - c``; at least 2 for ``|I| <= 1``."""
    c = cross_constant(lam)
    return (2.0 + c) * interval.length ** (-2 * lam) - c


def level_weights(resolution: int, lam: float) -> np.ndarray:
    """Weight of every level ``0 .. resolution - 1``."""
    c = cross_constant(lam)
    j = np.arange(resolution)
    return (2.0 + c) * 2.0 ** (2 * lam * j) - c


def _check_lambda(lam: float):
    if not 0.0 < lam < 1.0:
        raise PreconditionError(f"lambda must lie in (0, 1), got {lam}")


def seminorm_sq_quadrature(f: GridFunction, lam: float, method: str = "fast") -> float:
    """Exact double integral over ``Q`` for a piecewise-constant ``f``.

    ``method="brute"`` visits every pair of cells in each unit interval;
    ``method="fast"`` works one level set at a time, using the within-half
    means and sums of squares of every dyadic interval (O(n J)).
    """
    _check_lambda(lam)
    if method == "brute":
        return _seminorm_brute(f, lam)
    if method != "fast":
        raise ValueError(f"unknown method {method!r}")
    J = f.resolution
    w2 = f.cell_width**2
    mean = np.array(f.values)
    ss = np.zeros(mean.size)
    total = 0.0
    for j in range(J - 1, -1, -1):
        half = 1 << (J - j - 1)
        ml, mr = mean[0::2], mean[1::2]
        sl, sr = ss[0::2], ss[1::2]
        gap = np.abs(ml - mr) ** 2
        # sum over a in left half, b in right half of |f_a - f_b|**2, both orders
        pair_sum = 2.0 * (half * (sl + sr) + half * half * gap)
        total += 2.0 ** (j * (1 + 2 * lam)) * float(np.sum(pair_sum)) * w2
        ss = sl + sr + 0.5 * half * gap
        mean = 0.5 * (ml + mr)
    return total


def _seminorm_brute(f: GridFunction, lam: float) -> float:
    J = f.resolution
    n_unit = 1 << J
    e = delta_exponents(n_unit, J)
    kernel = np.ldexp(1.0, -e) ** (1 + 2 * lam)
    np.fill_diagonal(kernel, 0.0)
    total = 0.0
    for block in f.unit_blocks():
        diff = np.abs(block[:, None] - block[None, :]) ** 2
        total += float(np.sum(diff * kernel))
    return total * f.cell_width**2


def _detail_weighted_sum(c: HaarCoefficients, lam: float) -> float:
    weights = level_weights(c.resolution, lam)
    return float(sum(w * np.sum(np.abs(d) ** 2) for w, d in zip(weights, c.detail)))


def seminorm_sq_coefficients(c: HaarCoefficients, lam: float, atol: float = 0.0) -> float:
    """``sum_I |c_I|**2 w(I)``; requires a vanishing coarse part."""
    _check_lambda(lam)
    if not c.has_zero_coarse(atol):
        raise PreconditionError("coefficient identity holds for functions with P0 f = 0 only")
    return _detail_weighted_sum(c, lam)


def besov_norm(f: GridFunction, lam: float, method: str = "quadrature") -> float:
    """``sqrt(||f||_2**2 + seminorm**2)``.

    ``method`` is ``"quadrature"`` (fast exact quadrature) or ``"coefficients"``.
    The unit-interval means do not enter the seminorm, so no P0 condition is needed.
    """
    if method == "quadrature":
        semi = seminorm_sq_quadrature(f, lam)
    elif method == "coefficients":
        _check_lambda(lam)
        semi = _detail_weighted_sum(analyze(f), lam)
    else:
        raise ValueError(f"unknown method {method!r}")
    return math.sqrt(f.l2_norm() ** 2 + semi)


def coefficient_norm(c: HaarCoefficients, lam: float) -> float:
    """``(sum_I |c_I|**2 |I|**(-2 lam))**(1/2)`` over the detail coefficients."""
    j = np.arange(c.resolution)
    scale = 2.0 ** (2 * lam * j)
    return math.sqrt(float(sum(s * np.sum(np.abs(d) ** 2) for s, d in zip(scale, c.detail))))


def equivalence_ratio(f: GridFunction, lam: float) -> float:
    """``(||f||_2 + coefficient_norm) / besov_norm`` for mean-zero ``f``."""
    if not f.mean_zero_per_unit():
        raise PreconditionError("equivalence ratio is defined for functions with P0 f = 0")
    denom = besov_norm(f, lam)
    if denom == 0.0:
        raise PreconditionError("ratio is undefined for the zero function")
    return (f.l2_norm() + coefficient_norm(analyze(f), lam)) / denom


def equivalence_bracket(lam: float) -> tuple[float, float]:
    """Bounds for :func:`equivalence_ratio` implied by ``2 s <= w <= (2 + c) s``,
    where ``s = |I|**(-2 lam)``."""
    return 1.0 / math.sqrt(2.0 + cross_constant(lam)), math.sqrt(2.0)


def polarized_quadrature(phi: GridFunction, psi: GridFunction, lam: float) -> complex:
    """``iint_Q (phi(x) - phi(y)) conj(psi(x) - psi(y)) / delta**(1 + 2 lam)`` (brute force)."""
    _check_lambda(lam)
    J = phi.resolution
    e = delta_exponents(1 << J, J)
    kernel = np.ldexp(1.0, -e) ** (1 + 2 * lam)
    np.fill_diagonal(kernel, 0.0)
    total = 0.0 + 0.0j
    for a, b in zip(phi.unit_blocks(), psi.unit_blocks()):
        da = a[:, None] - a[None, :]
        db = b[:, None] - b[None, :]
        total += complex(np.sum(da * np.conj(db) * kernel))
    return total * phi.cell_width**2


def level_integral(j: int, phi: GridFunction, psi: GridFunction) -> complex:
    """``iint over {delta = 2**-j} of (phi(x) - phi(y)) conj(psi(x) - psi(y))`` for ``j >= 0``."""
    J = phi.resolution
    mask = level_set_mask(j, J, 1)
    total = 0.0 + 0.0j
    for a, b in zip(phi.unit_blocks(), psi.unit_blocks()):
        da = a[:, None] - a[None, :]
        db = b[:, None] - b[None, :]
        total += complex(np.sum((da * np.conj(db))[mask]))
    return total * phi.cell_width**2
