#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
import math  # Used for the hand evaluated values


# External imports
import numpy as np  # Used for the training data
from numpy.testing import assert_allclose  # Used for the numerical checks
import pytest  # Used for the parametrised and error cases


# Internal imports
from trussbuckle.errors import ConfigurationError
from trussbuckle.sampling import sobol_points
from trussbuckle.surrogate import (
    DEFAULT_THETA,
    gp_condition,
    gp_fit,
    gp_predict,
    kernel_matrix,
    log_marginal_likelihood,
    matern_cov,
)

################################### CLASSES ####################################

# Your classes go here

################################## FUNCTIONS ###################################


def random_instance(seed: int):
    """
    Returns random inputs, outputs and well conditioned hyperparameters.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 51))
    d = int(rng.integers(1, 4))
    A = rng.random((n, d))
    g = rng.standard_normal(n)
    theta = (
        float(rng.choice([0.5, 1.5, 2.5])),
        float(rng.uniform(0.1, 0.5)),
        float(rng.uniform(0.05, 0.3)),
    )
    return A, g, theta


def dense_covariance(A: np.ndarray, theta) -> np.ndarray:
    """
    C(A, A) + noise^2.I without any factorisation.
    """
    nu, eta, noise = theta
    return kernel_matrix(A, A, nu, eta) + noise ** 2 * np.eye(A.shape[0])


def test_matern_at_zero_distance():
    """
    Every kernel is 1 at zero distance.
    """
    for nu in (0.5, 1.5, 2.5):
        assert matern_cov(np.array([0.3, 0.4]), np.array([0.3, 0.4]), nu, 0.2) == 1.0


@pytest.mark.parametrize("ratio", [0.5, 1.0, 2.0])
def test_matern_exponential(ratio):
    """
    nu = 1/2 is the exponential kernel.
    """
    eta = 0.4
    value = matern_cov(np.zeros(1), np.array([ratio * eta]), 0.5, eta)
    assert value == pytest.approx(math.exp(-ratio), rel=1e-14)


def test_matern_closed_forms():
    """
    nu = 3/2 at r = eta/sqrt(3) is 2/e, nu = 5/2 follows its polynomial.
    """
    eta = 0.7
    a = np.zeros(2)
    b = np.array([eta / math.sqrt(3.0), 0.0])
    assert matern_cov(a, b, 1.5, eta) == pytest.approx(2.0 * math.exp(-1.0), rel=1e-14)
    c = np.array([0.0, eta / math.sqrt(5.0)])
    expected = (1.0 + 1.0 + 1.0 / 3.0) * math.exp(-1.0)
    assert matern_cov(a, c, 2.5, eta) == pytest.approx(expected, rel=1e-14)
    assert matern_cov(a, c, 2.5, eta) == matern_cov(c, a, 2.5, eta)


def test_matern_invalid_parameters():
    """
    Only the closed form smoothness values and positive lengthscales.
    """
    with pytest.raises(ConfigurationError):
        matern_cov(np.zeros(1), np.ones(1), 1.0, 0.5)
    with pytest.raises(ConfigurationError):
        matern_cov(np.zeros(1), np.ones(1), 2.5, 0.0)


def test_log_marginal_likelihood_by_hand():
    """
    Single point likelihoods evaluated by hand.
    """
    A = np.zeros((1, 1))
    half_log_2pi = 0.5 * math.log(2.0 * math.pi)
    value = log_marginal_likelihood(A, np.array([0.0]), (2.5, 1.0, 0.0))
    assert value == pytest.approx(-half_log_2pi, rel=1e-12)
    assert value == pytest.approx(-0.91894, abs=1e-5)
    value = log_marginal_likelihood(A, np.array([1.0]), (2.5, 1.0, 1.0))
    assert value == pytest.approx(-0.25 - 0.5 * math.log(2.0) - half_log_2pi, rel=1e-12)
    assert value == pytest.approx(-1.51551, abs=1e-5)


@pytest.mark.parametrize("seed", range(20))
def test_log_marginal_likelihood_matches_dense_formula(seed):
    """
    The factorised likelihood equals the dense formula.
    """
    A, g, theta = random_instance(seed)
    C = dense_covariance(A, theta)
    _, log_det = np.linalg.slogdet(C)
    dense = (
        -0.5 * g @ np.linalg.solve(C, g)
        - 0.5 * log_det
        - 0.5 * g.size * math.log(2.0 * math.pi)
    )
    assert log_marginal_likelihood(A, g, theta) == pytest.approx(dense, rel=1e-10)


def test_duplicated_point_with_noise():
    """
    Noise keeps the likelihood of a repeated input finite.
    """
    A = np.array([[0.2], [0.7]])
    g = np.array([0.5, -0.5])
    single = log_marginal_likelihood(A, g, (2.5, 0.3, 0.1))
    doubled = log_marginal_likelihood(
        np.vstack([A, A[:1]]), np.append(g, 0.5), (2.5, 0.3, 0.1)
    )
    assert math.isfinite(single) and math.isfinite(doubled)
    assert doubled != single


def test_duplicated_point_without_noise_needs_jitter():
    """
    A singular kernel matrix is rescued by the diagonal shift.
    """
    A = np.array([[0.2], [0.2]])
    model = gp_condition(A, np.array([1.0, 3.0]), (2.5, 0.5, 0.0))
    assert model.jitter > 0.0


def test_noiseless_interpolation():
    """
    Without noise the posterior goes through the data with no variance left.
    """
    A = sobol_points(1, 7)
    g = np.sin(6.0 * A[:, 0]) + 2.0
    model = gp_condition(A, g, (2.5, 0.2, 0.0))
    mean, variance = gp_predict(model, A, full_cov=False)
    assert_allclose(mean, g, rtol=0.0, atol=1e-6)
    _, variance = gp_predict(model, A, full_cov=False, standardised=True)
    assert np.all(variance <= 1e-8)


def test_far_from_data():
    """
    Far from the data the posterior returns to the standardised prior.
    """
    A = np.array([[0.0], [0.05], [0.1]])
    model = gp_condition(A, np.array([1.0, 2.0, 4.0]), (2.5, 0.01, 1e-8))
    far = np.array([[1.0]])
    mean, variance = gp_predict(model, far, full_cov=False, standardised=True)
    assert mean[0] == pytest.approx(0.0, abs=1e-10)
    assert variance[0] == pytest.approx(1.0, abs=1e-10)
    raw_mean, _ = gp_predict(model, far, full_cov=False)
    assert raw_mean[0] == pytest.approx(model.output_mean)


@pytest.mark.parametrize("seed", range(5))
def test_prediction_matches_dense_formulas(seed):
    """
    The cached factorisation reproduces the dense posterior.
    """
    A, g, theta = random_instance(seed)
    model = gp_condition(A, g, theta)
    rng = np.random.default_rng(100 + seed)
    A_star = rng.random((6, A.shape[1]))
    mean, cov = gp_predict(model, A_star, standardised=True)
    nu, eta, _ = theta
    C = dense_covariance(A, theta)
    cross = kernel_matrix(A_star, A, nu, eta)
    dense_mean = cross @ np.linalg.solve(C, model.outputs)
    prior = kernel_matrix(A_star, A_star, nu, eta)
    dense_cov = prior - cross @ np.linalg.solve(C, cross.T)
    assert_allclose(mean, dense_mean, rtol=1e-10, atol=1e-10)
    assert_allclose(cov, dense_cov, rtol=1e-10, atol=1e-10)
    _, variance = gp_predict(model, A_star, full_cov=False, standardised=True)
    assert_allclose(variance, np.diag(cov), rtol=1e-10, atol=1e-10)


def test_posterior_mean_is_linear_in_outputs():
    """
    predict(g1 + g2) = predict(g1) + predict(g2) for fixed hyperparameters.
    """
    A, g1, theta = random_instance(3)
    g2 = np.random.default_rng(7).standard_normal(g1.size)
    A_star = np.random.default_rng(8).random((4, A.shape[1]))
    first, _ = gp_predict(gp_condition(A, g1, theta), A_star, full_cov=False)
    second, _ = gp_predict(gp_condition(A, g2, theta), A_star, full_cov=False)
    both, _ = gp_predict(gp_condition(A, g1 + g2, theta), A_star, full_cov=False)
    assert_allclose(both, first + second, rtol=1e-10, atol=1e-10)


def test_fitted_variance_bounded_by_prior():
    """
    Posterior variances lie between 0 and the prior variance.
    """
    rng = np.random.default_rng(12)
    A = rng.random((15, 2))
    g = np.sin(3.0 * A[:, 0]) * np.cos(2.0 * A[:, 1])
    model = gp_fit(A, g)
    assert model.nu in (0.5, 1.5, 2.5)
    assert 1e-3 <= model.eta <= 1e3
    assert 1e-8 <= model.noise <= 1.0
    A_star = rng.random((200, 2))
    _, variance = gp_predict(model, A_star, full_cov=False, standardised=True)
    assert np.all(variance >= 0.0)
    assert np.all(variance <= 1.0 + 1e-10)


def test_fit_invariant_to_output_scaling():
    """
    Affine changes of the outputs carry over to the predictions.
    """
    rng = np.random.default_rng(5)
    A = rng.random((10, 1))
    g = np.exp(A[:, 0]) - A[:, 0] ** 2
    A_star = rng.random((5, 1))
    mean, _ = gp_predict(gp_fit(A, g), A_star, full_cov=False)
    scaled, _ = gp_predict(gp_fit(A, 3.0 * g + 7.0), A_star, full_cov=False)
    assert_allclose(scaled, 3.0 * mean + 7.0, rtol=1e-6)


def test_constant_outputs():
    """
    Constant data gives a constant prediction.
    """
    A = sobol_points(2, 6)
    model = gp_fit(A, np.full(6, 2.0))
    mean, _ = gp_predict(model, np.random.default_rng(1).random((5, 2)), full_cov=False)
    assert_allclose(mean, 2.0)


def test_single_point_uses_default_hyperparameters():
    """
    One observation cannot be fitted, the default hyperparameters are used.
    """
    model = gp_fit(np.array([[0.5, 0.5]]), np.array([3.0]))
    assert model.theta == DEFAULT_THETA
    mean, _ = gp_predict(model, np.array([[0.5, 0.5]]), full_cov=False)
    assert mean[0] == pytest.approx(3.0)


def test_test_inputs_are_clamped():
    """
    Test inputs outside the unit box are moved onto it.
    """
    A = sobol_points(1, 5)
    model = gp_condition(A, A[:, 0] ** 2, (1.5, 0.3, 1e-6))
    outside, _ = gp_predict(model, np.array([[1.5], [-0.5]]), full_cov=False)
    border, _ = gp_predict(model, np.array([[1.0], [0.0]]), full_cov=False)
    assert_allclose(outside, border)


def test_invalid_data():
    """
    Mismatched or empty data and inputs of the wrong dimension are refused.
    """
    with pytest.raises(ConfigurationError):
        gp_fit(np.zeros((3, 1)), np.zeros(2))
    with pytest.raises(ConfigurationError):
        gp_fit(np.zeros((0, 1)), np.zeros(0))
    with pytest.raises(ConfigurationError):
        gp_condition(np.zeros((1, 1)), np.zeros(1), (2.5, 0.5, -1.0))
    model = gp_condition(np.zeros((1, 2)), np.zeros(1), DEFAULT_THETA)
    with pytest.raises(ConfigurationError):
        gp_predict(model, np.zeros((1, 3)))


@pytest.mark.slow
def test_lengthscale_recovery():
    """
    Data drawn from a known process gives back its lengthscale.
    """
    rng = np.random.default_rng(2024)
    A = rng.random((40, 2))
    theta = (2.5, 0.3, 1e-4)
    C = dense_covariance(A, theta)
    g = np.linalg.cholesky(C) @ rng.standard_normal(40)
    model = gp_fit(A, g, nus=(2.5,))
    assert 0.15 <= model.eta <= 0.6


##################################### MAIN #####################################

if __name__ == "__main__":
    # The code to run when this file is used as a script goes here
    pass

##################################### EOF ######################################
