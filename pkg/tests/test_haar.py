import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dyadic_schrodinger import GridFunction, HaarCoefficients, analyze, haar_function, partial_sum, synthesize
from dyadic_schrodinger.dyadic import DyadicInterval, GridPoint, intervals_up_to
from dyadic_schrodinger.exceptions import FormatError, ResolutionError
from dyadic_schrodinger.haar import haar_eval, level_contributions, read_coefficients_csv, write_coefficients_csv

from conftest import random_grid


def test_haar_eval_examples():
    unit = DyadicInterval(0, 1)
    assert haar_eval(unit, GridPoint.from_real(0.25, 4)) == 1.0
    assert haar_eval(unit, GridPoint.from_real(0.75, 4)) == -1.0
    assert haar_eval(DyadicInterval(1, 1), GridPoint.from_real(0.75, 4)) == 0.0
    with pytest.raises(ResolutionError):
        haar_eval(DyadicInterval(3, 1), GridPoint(3, 0))


def test_haar_function_matches_eval():
    J = 5
    for I in intervals_up_to(J - 1):
        h = haar_function(I, J)
        expected = [haar_eval(I, GridPoint(J, i)) for i in range(1 << J)]
        assert np.array_equal(h.values.real, expected)
    with pytest.raises(ResolutionError):
        haar_function(DyadicInterval(5, 1), 5)


def test_haar_system_orthonormal():
    J = 6
    hs = np.array([haar_function(I, J).values.real for I in intervals_up_to(J - 1)])
    gram = hs @ hs.T * 2.0**-J
    assert np.allclose(gram, np.eye(len(hs)), rtol=0, atol=1e-15)


def test_analyze_examples():
    c = analyze(haar_function(DyadicInterval(2, 1), 5))
    assert c[2, 1] == 1.0
    assert np.count_nonzero(c.flat_detail()) == 1 and np.all(c.coarse == 0)
    one = analyze(GridFunction(5, 1, np.ones(32)))
    assert np.array_equal(one.coarse, [1.0]) and not np.any(one.flat_detail())


def test_analyze_against_inner_products(rng):
    J, L = 6, 2
    f = random_grid(rng, J, L)
    c = analyze(f)
    for I in intervals_up_to(J - 1, L):
        direct = np.sum(f.values * haar_function(I, J, L).values) * f.cell_width
        assert abs(c[I.level, I.position] - direct) <= 1e-13 * f.scale
    means = f.values.reshape(L, -1).sum(axis=1) * f.cell_width
    assert np.allclose(c.coarse, means, rtol=0, atol=1e-13 * f.scale)


@settings(max_examples=50)
@given(st.integers(0, 9), st.sampled_from([1, 2, 4]), st.integers(0, 2**32 - 1))
def test_round_trip_and_parseval(J, L, seed):
    rng = np.random.default_rng(seed)
    f = random_grid(rng, J, L)
    c = analyze(f)
    back = synthesize(c)
    assert np.max(np.abs(back.values - f.values)) <= 1e-13 * f.scale
    assert abs(c.energy() - f.l2_norm() ** 2) <= 1e-12 * f.l2_norm() ** 2


def test_synthesize_examples_and_linearity(rng):
    J = 5
    c = HaarCoefficients.from_dict(J, 1, {(0, 1): 1.0})
    assert np.array_equal(synthesize(c).values, haar_function(DyadicInterval(0, 1), J).values)
    c1 = analyze(random_grid(rng, J))
    c2 = analyze(random_grid(rng, J))
    a = 0.3 - 1.7j
    lhs = synthesize(c1 * a + c2).values
    rhs = (synthesize(c1) * a + synthesize(c2)).values
    assert np.allclose(lhs, rhs, rtol=0, atol=1e-14)
    again = analyze(synthesize(c1))
    assert np.allclose(again.flat_detail(), c1.flat_detail(), rtol=0, atol=1e-15)


def test_partial_sum(rng):
    J = 7
    f = random_grid(rng, J)
    c = analyze(f)
    full = synthesize(c.truncate(J - 1))
    assert np.allclose(partial_sum(c, J - 1).values, full.values)
    assert np.allclose(partial_sum(c, 10).values, (f - GridFunction(J, 1, np.full(1 << J, c.coarse[0]))).values)
    only1 = HaarCoefficients.from_dict(J, 1, {(1, 2): 1.0})
    assert not np.any(partial_sum(only1, 0).values)
    assert not np.any(partial_sum(c, -1).values)
    for N in range(J):
        # levels 0..N reproduce the averages over level-(N+1) intervals, minus the unit mean
        size = 1 << (J - N - 1)
        avg = np.repeat(f.values.reshape(-1, size).mean(axis=1), size)
        assert np.allclose(partial_sum(c, N).values, avg - f.values.mean(), rtol=0, atol=1e-13)


def test_level_contributions_sum(rng):
    f = random_grid(rng, 6, 2, mean_zero=True)
    contrib = level_contributions(analyze(f))
    assert contrib.shape == (6, 128)
    assert np.allclose(contrib.sum(axis=0), f.values, rtol=0, atol=1e-13)


@given(arrays(np.float64, 16, elements=st.floats(-1e6, 1e6)), st.floats(-10, 10))
def test_analyze_linear(values, a):
    f = GridFunction(4, 1, values)
    lhs = analyze(f * a).flat_detail()
    rhs = analyze(f).flat_detail() * a
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-9)


def test_coefficients_csv(tmp_path, rng):
    c = analyze(random_grid(rng, 4, 2))
    path = tmp_path / "c.csv"
    write_coefficients_csv(c, path)
    back = read_coefficients_csv(path)
    assert np.array_equal(back.coarse, c.coarse)
    assert np.array_equal(back.flat_detail(), c.flat_detail())
    path.write_text("# haarcoeffs v1 J=1 L=1\n-1,1,0,0\n")
    with pytest.raises(FormatError):
        read_coefficients_csv(path)
    path.write_text("# haarcoeffs v1 J=1 L=1\n-1,1,0,0\n3,1,0,0\n")
    with pytest.raises(FormatError):
        read_coefficients_csv(path)
    path.write_text("nonsense\n")
    with pytest.raises(FormatError):
        read_coefficients_csv(path)


def test_coefficient_validation():
    with pytest.raises(ValueError):
        HaarCoefficients(2, 1, [0.0], [np.zeros(1)])
    with pytest.raises(ValueError):
        HaarCoefficients(2, 1, [0.0], [np.zeros(1), np.zeros(3)])
    with pytest.raises(ResolutionError):
        HaarCoefficients.from_dict(2, 1, {(2, 1): 1.0})
