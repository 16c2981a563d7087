import math

import numpy as np
import pytest

from dyadic_schrodinger import BesovParams, GridFunction, HaarCoefficients, analyze, generate_besov_sample, maximal, partial_sum
from dyadic_schrodinger.dyadic import DyadicInterval, GridPoint, intervals_up_to
from dyadic_schrodinger.exceptions import PreconditionError
from dyadic_schrodinger.grid import generate_lipschitz_sample
from dyadic_schrodinger.haar import haar_function

from conftest import random_grid

P = BesovParams(0.7, 0.3)


def ancestors(cell, J):
    return [DyadicInterval.containing_cell(cell, J, j) for j in range(J + 1)]


def brute_M(f, cell):
    J = f.resolution
    return max(np.mean(np.abs(f.values[slice(*I.cell_range(J))])) for I in ancestors(cell, J))


def brute_sharp(f, lam, cell):
    J = f.resolution
    best = 0.0
    for I in ancestors(cell, J)[:-1]:
        block = f.values[slice(*I.cell_range(J))]
        best = max(best, np.sum(np.abs(block - f.values[cell])) * f.cell_width / I.length ** (1 + lam))
    return best


def mean_zero_coeffs(f):
    c = analyze(f)
    return HaarCoefficients(c.resolution, c.domain_length, np.zeros_like(c.coarse), c.detail)


def test_hardy_littlewood(rng):
    J = 6
    const = GridFunction(J, 1, np.full(64, -2.0 + 0j))
    assert np.allclose(maximal.hardy_littlewood_dyadic(const), 2.0)
    h = GridFunction.from_callable(lambda x: np.where(x < 0.5, 1.0, -1.0), J)
    assert maximal.hardy_littlewood_dyadic(h)[GridPoint.from_real(0.1, J).cell] == 1.0
    f = random_grid(rng, J, 2)
    m = maximal.hardy_littlewood_dyadic(f)
    assert np.all(m >= np.abs(f.values))
    assert np.allclose(m, [brute_M(f, i) for i in range(f.n_cells)], rtol=1e-14)


def test_sharp_dyadic(rng):
    J = 6
    assert not np.any(maximal.sharp_maximal_dyadic(GridFunction(J, 1, np.full(64, 3.0)), 0.5))
    h = haar_function(DyadicInterval(0, 1), J)
    assert math.isclose(maximal.sharp_maximal_dyadic(h, 0.5)[GridPoint.from_real(0.25, J).cell], 1.0)
    f = random_grid(rng, J, 2)
    got = maximal.sharp_maximal_dyadic(f, 0.4)
    assert np.allclose(got, [brute_sharp(f, 0.4, i) for i in range(f.n_cells)], rtol=1e-13)


def test_sharp_grid(rng):
    J = 5
    assert not np.any(maximal.sharp_maximal_grid(GridFunction(J, 1, np.full(32, 3.0)), 0.5))
    f = random_grid(rng, J)
    assert np.all(maximal.sharp_maximal_grid(f, 0.5) >= maximal.sharp_maximal_dyadic(f, 0.5) * (1 - 1e-14))
    h = haar_function(DyadicInterval(0, 1), J)
    x = GridPoint.from_real(0.5 - 2.0**-J, J).cell
    assert maximal.sharp_maximal_grid(h, 0.5)[x] > maximal.sharp_maximal_dyadic(h, 0.5)[x]


def test_sharp_grid_brute_force():
    f = random_grid(np.random.default_rng(2), 4)
    n, w = f.n_cells, f.cell_width
    got = maximal.sharp_maximal_grid(f, 0.3)
    for i in range(n):
        best = 0.0
        for a in range(i + 1):
            for b in range(i + 1, n + 1):
                osc = np.sum(np.abs(f.values[a:b] - f.values[i])) * w
                best = max(best, osc / ((b - a) * w) ** 1.3)
        assert math.isclose(got[i], best, rel_tol=1e-13)


def test_partial_sums(rng):
    f = random_grid(rng, 6, mean_zero=True)
    c = mean_zero_coeffs(f)
    for N in range(6):
        assert np.allclose(maximal.oscillatory_partial_sum(c, 0.3, 0.0, N).values, partial_sum(c, N).values)
    assert not np.any(maximal.oscillatory_partial_sum(c, 0.3, 0.5, -1).values)
    rotated = c * np.exp(0.7j)
    a = np.abs(maximal.oscillatory_partial_sums(c, 0.3, 0.4))
    b = np.abs(maximal.oscillatory_partial_sums(rotated, 0.3, 0.4))
    assert np.allclose(a, b, rtol=1e-14)
    with pytest.raises(PreconditionError):
        maximal.oscillatory_partial_sum(analyze(random_grid(rng, 4)), 0.3, 0.1, 2)


def test_star_maximal():
    J = 6
    I = DyadicInterval(3, 2)
    one = HaarCoefficients.from_dict(J, 1, {(3, 2): 0.5 - 0.5j})
    star = maximal.star_maximal(one, 0.3, maximal.default_t_grid(16))
    assert np.allclose(star, abs(0.5 - 0.5j) * np.abs(haar_function(I, J).values.real))
    f = generate_besov_sample(J, 1, 0.7, 3, per_level=2)
    c = mean_zero_coeffs(f)
    tg = maximal.default_t_grid(32)
    star = maximal.star_maximal(c, 0.3, tg)
    for t in tg[::5]:
        assert np.all(np.abs(maximal.oscillatory_partial_sums(c, 0.3, t)) <= star + 1e-15)
    with pytest.raises(PreconditionError):
        maximal.star_maximal(c, 0.3, [])


@pytest.mark.parametrize("seed", range(4))
def test_star_maximal_bounds(seed):
    f = generate_besov_sample(8, 1, P.lam, seed, per_level=2)
    c = mean_zero_coeffs(f)
    md = maximal.hardy_littlewood_dyadic(f)
    ms = maximal.sharp_maximal_dyadic(f, P.lam)
    tg = maximal.default_t_grid(128)
    for t in tg:
        assert np.all(maximal.star_t_maximal(c, P.beta, t) <= P.c_max * t * ms + 2 * md + 1e-12)
    assert np.all(maximal.star_maximal(c, P.beta, tg) <= P.c_max * ms + 2 * md + 1e-12)


def test_rate_constant():
    g = P.gap
    assert math.isclose(maximal.rate_constant(P), 2 * 2**g / (1 - 2**-g))


def test_rate_bound_cases():
    tg = maximal.default_t_grid(64)
    for I in list(intervals_up_to(6))[::9]:
        h = haar_function(I, 8)
        assert maximal.convergence_rate_bound(h, P, tg).passed
    z = maximal.convergence_rate_bound(GridFunction.zeros(6), P, tg)
    assert z.passed and not np.any(z.lhs) and not np.any(z.rhs)
    for seed in range(3):
        res = maximal.convergence_rate_bound(generate_besov_sample(8, 1, P.lam, seed, per_level=2), P, tg)
        assert res.violations == 0 and res.max_violation == 0.0 and np.max(res.ratios) < 1
    with pytest.raises(PreconditionError):
        maximal.convergence_rate_bound(random_grid(np.random.default_rng(0), 5), P, tg)
    with pytest.raises(PreconditionError):
        maximal.convergence_rate_bound(GridFunction.zeros(5), P, [0.0, 0.1])


def test_lipschitz_data_converges():
    g, _ = generate_lipschitz_sample(8, 1, 1.0, seed=1)
    assert maximal.convergence_rate_bound(g, P, 2.0 ** -np.arange(20)).passed
    c = mean_zero_coeffs(g)
    errs = [
        np.max(np.abs(maximal.oscillatory_partial_sums(c, P.beta, t)[-1] - g.values)) for t in 2.0 ** -np.arange(12)
    ]
    assert all(b < a for a, b in zip(errs, errs[1:]))


@pytest.mark.parametrize("seed", range(3))
def test_lipschitz_cauchy(seed):
    g, lip = generate_lipschitz_sample(8, 1, 1.0, seed)
    count, worst = maximal.lipschitz_cauchy_violations(g, lip, P.beta, maximal.default_t_grid(32))
    assert count == 0 and 0 < worst <= 1
