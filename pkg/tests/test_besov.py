import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyadic_schrodinger import GridFunction, HaarCoefficients, analyze, besov, haar_function, synthesize
from dyadic_schrodinger.dyadic import DyadicInterval, intervals_up_to
from dyadic_schrodinger.exceptions import PreconditionError

from conftest import random_grid


def test_weight_values():
    for lam in (0.2, 0.5, 0.9):
        assert math.isclose(besov.besov_weight(DyadicInterval(0, 1), lam), 2.0)
    assert math.isclose(besov.besov_weight(DyadicInterval(1, 1), 0.5), 5.0)
    assert math.isclose(besov.besov_weight(DyadicInterval(2, 3), 0.5), 11.0)


@pytest.mark.parametrize("level, doubled", [(1, 6.0), (2, 14.0)])
def test_doubled_cross_constant_disagrees_with_quadrature(level, doubled):
    # with c = 2 / (2**(2 lam) - 1) the weights would be 6 and 14 at lam = 1/2
    h = haar_function(DyadicInterval(level, 1), 8)
    quad = besov.seminorm_sq_quadrature(h, 0.5, method="brute")
    assert math.isclose(quad, besov.besov_weight(DyadicInterval(level, 1), 0.5), rel_tol=1e-13)
    assert abs(quad - doubled) > 0.5


@pytest.mark.parametrize("lam", [0.1, 0.3, 0.5, 0.7, 0.95])
def test_weight_sandwich(lam):
    c = besov.cross_constant(lam)
    for I in intervals_up_to(10):
        s = I.length ** (-2 * lam)
        w = besov.besov_weight(I, lam)
        assert 2 * s <= w * (1 + 1e-15) and w <= (2 + c) * s * (1 + 1e-15)
    assert np.allclose(
        besov.level_weights(6, lam), [besov.besov_weight(DyadicInterval(j, 1), lam) for j in range(6)]
    )


def test_seminorm_examples():
    J = 6
    const = GridFunction(J, 2, np.full(128, 2.5 - 1j))
    assert besov.seminorm_sq_quadrature(const, 0.4) == 0.0
    h = haar_function(DyadicInterval(0, 1), J)
    assert math.isclose(besov.seminorm_sq_quadrature(h, 0.5), 2.0, rel_tol=1e-14)
    assert math.isclose(besov.besov_norm(h, 0.5), math.sqrt(3.0), rel_tol=1e-14)
    assert besov.besov_norm(GridFunction.zeros(J), 0.5) == 0.0
    assert math.isclose(besov.equivalence_ratio(h, 0.5), 2 / math.sqrt(3), rel_tol=1e-14)


@pytest.mark.parametrize("lam", [0.3, 0.5, 0.7])
def test_quadrature_equals_coefficients(rng, lam):
    for J, L in [(6, 1), (8, 1), (5, 4)]:
        f = random_grid(rng, J, L, mean_zero=True)
        c = analyze(f)
        q = besov.seminorm_sq_quadrature(f, lam)
        s = besov.seminorm_sq_coefficients(c, lam, atol=1e-12 * f.scale)
        assert abs(q - s) <= 1e-12 * s
        b = besov.seminorm_sq_quadrature(f, lam, method="brute")
        assert abs(q - b) <= 1e-12 * b


def test_quadrature_ignores_unit_means(rng):
    f = random_grid(rng, 6, 2)
    g = random_grid(rng, 6, 2, mean_zero=True)
    assert besov.seminorm_sq_quadrature(f, 0.5) > 0
    shifted = g + GridFunction(6, 2, np.repeat([3.0, -1.0], 64))
    assert math.isclose(besov.seminorm_sq_quadrature(shifted, 0.5), besov.seminorm_sq_quadrature(g, 0.5), rel_tol=1e-12)
    assert math.isclose(besov.besov_norm(f, 0.5, method="coefficients"), besov.besov_norm(f, 0.5), rel_tol=1e-12)


def test_coefficient_identity_needs_zero_coarse(rng):
    c = analyze(random_grid(rng, 5))
    with pytest.raises(PreconditionError):
        besov.seminorm_sq_coefficients(c, 0.5)
    with pytest.raises(PreconditionError):
        besov.seminorm_sq_quadrature(random_grid(rng, 5), 1.0)
    with pytest.raises(ValueError):
        besov.seminorm_sq_quadrature(random_grid(rng, 5), 0.5, method="other")


def test_single_coefficient_and_homogeneity():
    J = 6
    for j in range(J):
        c = HaarCoefficients.from_dict(J, 1, {(j, 1): 1.0})
        assert math.isclose(besov.seminorm_sq_coefficients(c, 0.4), besov.besov_weight(DyadicInterval(j, 1), 0.4), rel_tol=1e-15)
        a = 2.0 - 3.0j
        assert math.isclose(besov.seminorm_sq_coefficients(c * a, 0.4), abs(a) ** 2 * besov.besov_weight(DyadicInterval(j, 1), 0.4))


def test_norm_monotone_in_lambda():
    J = 7
    for j in range(J):
        f = synthesize(HaarCoefficients.from_dict(J, 1, {(j, 1): 1.0, (j, 1 << j): -0.5}))
        norms = [besov.besov_norm(f, lam) for lam in np.linspace(0.05, 0.95, 10)]
        assert all(b >= a * (1 - 1e-15) for a, b in zip(norms, norms[1:]))


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), st.floats(0.05, 0.95), st.floats(0.01, 100))
def test_equivalence_ratio_bracket_and_scaling(seed, lam, a):
    f = random_grid(np.random.default_rng(seed), 6, mean_zero=True)
    lo, hi = besov.equivalence_bracket(lam)
    r = besov.equivalence_ratio(f, lam)
    assert lo <= r <= hi
    assert math.isclose(besov.equivalence_ratio(f * a, lam), r, rel_tol=1e-12)


def test_equivalence_ratio_errors(rng):
    with pytest.raises(PreconditionError):
        besov.equivalence_ratio(random_grid(rng, 5), 0.5)
    with pytest.raises(PreconditionError):
        besov.equivalence_ratio(GridFunction.zeros(5), 0.5)


def test_cross_terms_vanish():
    J = 6
    hs = {I: haar_function(I, J) for I in intervals_up_to(4)}
    for I, K in itertools.permutations(hs, 2):
        assert abs(besov.polarized_quadrature(hs[I], hs[K], 0.5)) <= 1e-12
    for I in hs:
        assert math.isclose(besov.polarized_quadrature(hs[I], hs[I], 0.5).real, besov.besov_weight(I, 0.5), rel_tol=1e-13)


def test_level_integrals_sum_to_weight():
    J, lam = 8, 0.3
    for I in intervals_up_to(6):
        h = haar_function(I, J)
        total = sum(2.0 ** (j * (1 + 2 * lam)) * besov.level_integral(j, h, h).real for j in range(J))
        assert abs(total - besov.besov_weight(I, lam)) <= 1e-12 * besov.besov_weight(I, lam)
        # the level of I itself contributes 2 |I|**(-2 lam)
        own = 2.0 ** (I.level * (1 + 2 * lam)) * besov.level_integral(I.level, h, h).real
        assert math.isclose(own, 2 * I.length ** (-2 * lam), rel_tol=1e-13)
