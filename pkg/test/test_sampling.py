#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
import math  # Used for the statistical bounds


# External imports
import numpy as np  # Used for the sample arrays
from numpy.testing import assert_allclose, assert_array_equal  # Used for checks
import pytest  # Used for the parametrised and error cases


# Internal imports
from trussbuckle.errors import ConfigurationError
from trussbuckle.generators import default_sigma, generate
from trussbuckle.model import apply_imperfection
from trussbuckle.sampling import (
    RANDOM,
    BucklingSampleSet,
    ImperfectionDistribution,
    SobolStream,
    buckling_statistics,
    empirical_moments,
    setwise_moments,
    sobol_points,
    to_gaussian,
)
from trussbuckle.stability import critical_load, linear_buckling_modes

################################### CLASSES ####################################

# Your classes go here

################################## FUNCTIONS ###################################

# Joe-Kuo (s, a, m) direction numbers of dimensions 2 to 16.
JOE_KUO = [
    (1, 0, [1]),
    (2, 1, [1, 3]),
    (3, 1, [1, 3, 1]),
    (3, 2, [1, 1, 1]),
    (4, 1, [1, 1, 3, 3]),
    (4, 4, [1, 3, 5, 13]),
    (5, 2, [1, 1, 5, 5, 17]),
    (5, 4, [1, 1, 5, 5, 5]),
    (5, 7, [1, 1, 7, 11, 19]),
    (5, 11, [1, 1, 5, 1, 1]),
    (5, 13, [1, 1, 1, 3, 11]),
    (5, 14, [1, 3, 5, 5, 31]),
    (6, 1, [1, 3, 3, 9, 7, 49]),
    (6, 13, [1, 1, 1, 15, 21, 21]),
    (6, 16, [1, 3, 1, 13, 27, 49]),
]


def reference_sobol(dimension: int, count: int, bits: int = 30) -> np.ndarray:
    """
    Bit by bit Sobol construction in Gray code order, origin first.
    """
    directions = np.zeros((dimension, bits), dtype=np.int64)
    directions[0] = [1 << (bits - 1 - k) for k in range(bits)]
    for d in range(1, dimension):
        s, a, m = JOE_KUO[d - 1]
        v = [m_k << (bits - 1 - k) for k, m_k in enumerate(m)]
        for k in range(s, bits):
            value = v[k - s] ^ (v[k - s] >> s)
            for i in range(1, s):
                if (a >> (s - 1 - i)) & 1:
                    value ^= v[k - i]
            v.append(value)
        directions[d] = v
    points = np.zeros((count, dimension))
    state = np.zeros(dimension, dtype=np.int64)
    for n in range(count):
        points[n] = state / float(1 << bits)
        # Index of the lowest zero bit of n.
        c = 0
        while (n >> c) & 1:
            c += 1
        state = state ^ directions[:, c]
    return points


def test_sobol_first_points():
    """
    The one dimensional sequence starts 0.5, 0.75, 0.25 after the origin.
    """
    assert_array_equal(sobol_points(1, 3)[:, 0], [0.5, 0.75, 0.25])
    assert_array_equal(sobol_points(1, 1, skip=2)[:, 0], [0.25])


def test_sobol_matches_reference_construction():
    """
    The first 1024 points of dimensions 1 to 16 match the bitwise
    construction exactly.
    """
    for dimension in (1, 2, 5, 16):
        expected = reference_sobol(dimension, 1024)
        full = sobol_points(dimension, 1024, skip_origin=False)
        assert_array_equal(full, expected)
        assert_array_equal(sobol_points(dimension, 1023), expected[1:])


@pytest.mark.parametrize("k", range(8))
def test_sobol_dyadic_boxes(k):
    """
    Every prefix of 2^k points of the two dimensional sequence puts exactly
    one point in every dyadic box of area 2^-k.
    """
    points = sobol_points(2, 2 ** k, skip_origin=False)
    for k1 in range(k + 1):
        k2 = k - k1
        column = np.floor(points[:, 0] * 2 ** k1)
        row = np.floor(points[:, 1] * 2 ** k2)
        cells = column * 2 ** k2 + row
        counts = np.bincount(cells.astype(int), minlength=2 ** k)
        assert np.all(counts == 1)


def test_sobol_stream_continues():
    """
    Consecutive draws continue the same sequence.
    """
    stream = SobolStream(3)
    first = stream.draw(5)
    second = stream.draw(7)
    assert stream.index == 13
    assert_array_equal(np.vstack([first, second]), sobol_points(3, 12))
    with_origin = SobolStream(3, skip_origin=False)
    assert with_origin.index == 0
    assert_array_equal(with_origin.draw(1), np.zeros((1, 3)))
    with_origin.skip(5)
    assert with_origin.index == 6
    assert_array_equal(with_origin.draw(1), sobol_points(3, 1, skip=5))


def test_sobol_dimension_bounds():
    """
    Dimensions outside the direction table are refused.
    """
    with pytest.raises(ConfigurationError):
        SobolStream(0)
    with pytest.raises(ConfigurationError):
        SobolStream(SobolStream.MAX_DIMENSION + 1)


def test_to_gaussian():
    """
    The inverse normal transform of Phi(1) is 1, shifted and scaled.
    """
    assert to_gaussian(0.8413447460685429) == pytest.approx(1.0, abs=1e-6)
    assert to_gaussian(0.5, 2.0, 3.0) == pytest.approx(2.0)
    assert to_gaussian(0.8413447460685429, 1.0, 2.0) == pytest.approx(3.0, abs=1e-6)
    assert_allclose(to_gaussian(np.array([0.5, 0.5]), 0.0, 1.0), [0.0, 0.0])
    with pytest.raises(ConfigurationError):
        to_gaussian(0.0)
    with pytest.raises(ConfigurationError):
        to_gaussian(1.0)


def test_transformed_sobol_moments():
    """
    1024 transformed Sobol points have the moments of the target normal.
    """
    sigma = 0.1
    values = to_gaussian(sobol_points(1, 1024)[:, 0], 0.0, sigma)
    assert abs(np.mean(values)) < 3.0 * sigma / math.sqrt(1024)
    assert np.std(values, ddof=1) == pytest.approx(sigma, rel=0.05)


def test_empirical_moments():
    """
    Sample mean and unbiased standard deviation.
    """
    assert empirical_moments([1.0, 2.0, 3.0]) == pytest.approx((2.0, 1.0))
    assert empirical_moments([4.0]) == (4.0, 0.0)
    with pytest.raises(ConfigurationError):
        empirical_moments([])


def test_moments_skip_flagged_samples():
    """
    Flagged samples are left out of the moments and the set-wise estimates.
    """
    samples = BucklingSampleSet(
        lambda_c0=10.0,
        betas=np.zeros((6, 1)),
        lambdas=np.array([1.0, 2.0, np.nan, 3.0, 5.0, 7.0]),
        flagged=np.array([False, False, True, False, False, False]),
    )
    assert empirical_moments(samples) == pytest.approx((3.6, math.sqrt(5.8)))
    estimates = setwise_moments(samples, 3)
    assert [sets for sets, _, _ in estimates] == [1, 2]
    assert estimates[0][1:] == pytest.approx((1.5, math.sqrt(0.5)))
    assert estimates[1][1:] == pytest.approx(empirical_moments(samples))
    rows = samples.table().buffer
    assert rows[2][-1] is True
    assert math.isnan(rows[2][-2])


def test_distribution_validation():
    """
    The standard deviations must be positive and match the modes.
    """
    model = generate("von_mises")
    basis = linear_buckling_modes(model, model.a_init, 1)
    dist = ImperfectionDistribution(modes=basis, sigma=0.01)
    assert_allclose(dist.sigma, [0.01])
    assert_allclose(dist.mean, [0.0])
    with pytest.raises(ConfigurationError):
        ImperfectionDistribution(modes=basis, sigma=-1.0)
    with pytest.raises(ConfigurationError):
        ImperfectionDistribution(modes=basis, sigma=[0.1, 0.2])


@pytest.mark.parametrize("kind", ["von_mises", "star_dome"])
@pytest.mark.parametrize("m", [8, pytest.param(64, marks=pytest.mark.slow)])
def test_warm_starts_match_cold_starts(kind, m):
    """
    Every warm started critical load is positive and equals an independent
    cold start.
    """
    model = generate(kind)
    basis = linear_buckling_modes(model, model.a_init, 1)
    dist = ImperfectionDistribution(modes=basis, sigma=default_sigma(kind))
    samples = buckling_statistics(model, model.a_init, dist, m)
    assert samples.n_samples == 2 * m
    assert not np.any(samples.flagged)
    assert np.all(samples.lambdas > 0.0)
    for beta, lam in zip(samples.betas, samples.lambdas):
        X = apply_imperfection(model.X0, basis.Phi, beta)
        cold = critical_load(model.with_coordinates(X), model.a_init)
        assert lam == pytest.approx(cold.lam, rel=1e-8)


def test_statistics_are_deterministic_and_thread_safe():
    """
    Sobol runs repeat exactly, with one or two workers.
    """
    model = generate("von_mises")
    basis = linear_buckling_modes(model, model.a_init, 1)
    dist = ImperfectionDistribution(modes=basis, sigma=0.01)
    once = buckling_statistics(model, model.a_init, dist, 16)
    twice = buckling_statistics(model, model.a_init, dist, 16, workers=2)
    assert_array_equal(once.lambdas, twice.lambdas)
    expected = to_gaussian(sobol_points(1, 32)[:, 0], 0.0, 0.01)
    assert_array_equal(once.betas[:, 0], expected)


def test_tiny_imperfections_recover_the_perfect_load():
    """
    Vanishing imperfections give the critical load of the perfect truss.
    """
    model = generate("von_mises")
    basis = linear_buckling_modes(model, model.a_init, 1)
    dist = ImperfectionDistribution(modes=basis, sigma=1e-12)
    samples = buckling_statistics(model, model.a_init, dist, 4)
    mean, std = empirical_moments(samples)
    assert mean == pytest.approx(samples.lambda_c0, rel=1e-8)
    assert std < 1e-8 * mean


def test_random_sampler_uses_seed():
    """
    The pseudorandom sampler is reproducible from its seed.
    """
    model = generate("von_mises")
    basis = linear_buckling_modes(model, model.a_init, 1)
    dist = ImperfectionDistribution(modes=basis, sigma=0.01)
    first = buckling_statistics(model, model.a_init, dist, 4, sampler=RANDOM, seed=5)
    second = buckling_statistics(model, model.a_init, dist, 4, sampler=RANDOM, seed=5)
    assert_array_equal(first.betas, second.betas)
    assert first.sampler == RANDOM


@pytest.mark.slow
def test_quasi_monte_carlo_accuracy():
    """
    One set of 128 Sobol samples is close to a large pseudorandom reference,
    and the set-wise estimates settle.
    """
    model = generate("von_mises")
    basis = linear_buckling_modes(model, model.a_init, 1)
    dist = ImperfectionDistribution(modes=basis, sigma=default_sigma("von_mises"))
    reference = buckling_statistics(
        model, model.a_init, dist, 8192, sampler=RANDOM, seed=2024
    )
    ref_mean, ref_std = empirical_moments(reference)
    sobol = buckling_statistics(model, model.a_init, dist, 512)
    mean, std = empirical_moments(sobol.lambdas[:128])
    assert mean == pytest.approx(ref_mean, rel=0.01)
    assert std == pytest.approx(ref_std, rel=0.06)
    estimates = setwise_moments(sobol, 128)
    assert len(estimates) == 8
    assert estimates[7][1] == pytest.approx(estimates[3][1], rel=0.01)
    assert estimates[7][2] == pytest.approx(estimates[3][2], rel=0.03)


##################################### MAIN #####################################

if __name__ == "__main__":
    # The code to run when this file is used as a script goes here
    pass

##################################### EOF ######################################
