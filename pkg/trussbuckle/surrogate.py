#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
from typing import Sequence, Tuple  # Used for type hints
from dataclasses import dataclass  # Used for the fitted model
import logging  # Used for diagnostics


# External imports
import numpy as np  # Used for the array algebra
from scipy import linalg  # Used for the Cholesky factorisation
from scipy.optimize import minimize  # Used to maximise the likelihood
from scipy.spatial.distance import cdist  # Used for the pairwise distances


# Internal imports
from trussbuckle.errors import ConfigurationError, IllConditionedKernelError
from trussbuckle.sampling import sobol_points

################################### CLASSES ####################################

logger = logging.getLogger(__name__)

# Smoothness values with closed form kernels.
NU_VALUES = (0.5, 1.5, 2.5)
# Hyperparameter boxes, searched on a log scale.
ETA_BOUNDS = (1e-3, 1e3)
NOISE_BOUNDS = (1e-8, 1.0)
# Hyperparameters of a single point model.
DEFAULT_THETA = (2.5, 0.5, 1e-8)
# Diagonal shifts tried in turn when the kernel matrix is not positive
# definite.
JITTER = (0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8)


@dataclass(frozen=True)
class GpModel:
    """
    A fitted Gaussian process: standardised training data, hyperparameters
    and the cached Cholesky factorisation of C(A, A) + noise^2.I.
    """

    # Training inputs, one row per point.
    inputs: np.ndarray
    # Standardised training outputs.
    outputs: np.ndarray
    # Mean and scale removed from the raw outputs.
    output_mean: float
    output_scale: float
    nu: float
    eta: float
    noise: float
    # cho_factor result.
    factor: Tuple[np.ndarray, bool]
    # (C + noise^2.I)^-1 outputs.
    alpha: np.ndarray
    # Diagonal shift that made the factorisation succeed.
    jitter: float = 0.0

    @property
    def theta(self) -> Tuple[float, float, float]:
        """
        The hyperparameters (nu, eta, noise).
        """
        return (self.nu, self.eta, self.noise)


################################## FUNCTIONS ###################################


def _check_theta(nu: float, eta: float):
    """
    Raises a ConfigurationError for unsupported kernel parameters.
    """
    if nu not in NU_VALUES:
        raise ConfigurationError(f"nu must be one of {NU_VALUES}, got {nu}.")
    if not eta > 0.0:
        raise ConfigurationError(f"The lengthscale must be positive, got {eta}.")


def _matern(r: np.ndarray, nu: float, eta: float) -> np.ndarray:
    """
    Matern correlation at the distances r, closed forms for half integer nu.
    """
    if nu == 0.5:
        return np.exp(-r / eta)
    if nu == 1.5:
        scaled = np.sqrt(3.0) * r / eta
        return (1.0 + scaled) * np.exp(-scaled)
    scaled = np.sqrt(5.0) * r / eta
    return (1.0 + scaled + scaled ** 2 / 3.0) * np.exp(-scaled)


def matern_cov(a: np.ndarray, a_prime: np.ndarray, nu: float, eta: float) -> float:
    """
    Returns the Matern covariance of two inputs, 1 at zero distance.

    Arguments
    =========
     - a: The first input.
     - a_prime: The second input.
     - nu: The smoothness, one of NU_VALUES.
     - eta: The lengthscale.
    """
    _check_theta(nu, eta)
    r = float(np.linalg.norm(np.atleast_1d(a) - np.atleast_1d(a_prime)))
    return float(_matern(np.asarray(r), nu, eta))


def kernel_matrix(A: np.ndarray, B: np.ndarray, nu: float, eta: float) -> np.ndarray:
    """
    Returns the matrix of covariances between the rows of A and of B.
    """
    _check_theta(nu, eta)
    return _matern(cdist(np.atleast_2d(A), np.atleast_2d(B)), nu, eta)


def _factorize(
    A: np.ndarray, nu: float, eta: float, noise: float
) -> Tuple[Tuple[np.ndarray, bool], float]:
    """
    Cholesky factorisation of C(A, A) + noise^2.I, with the smallest jitter
    that succeeds.

    Exceptions
    ==========
    An IllConditionedKernelError is raised if every jitter level failed.
    """
    C = kernel_matrix(A, A, nu, eta) + noise ** 2 * np.eye(A.shape[0])
    for jitter in JITTER:
        try:
            factor = linalg.cho_factor(C + jitter * np.eye(A.shape[0]))
        except linalg.LinAlgError:
            continue
        if jitter > 0.0:
            logger.debug("kernel matrix needed a jitter of %g", jitter)
        return factor, jitter
    raise IllConditionedKernelError(
        f"Kernel matrix not positive definite (nu = {nu}, eta = {eta:g}, "
        f"noise = {noise:g})."
    )


def _log_likelihood(y: np.ndarray, factor: Tuple[np.ndarray, bool]) -> float:
    """
    Log marginal likelihood from a Cholesky factorisation.
    """
    alpha = linalg.cho_solve(factor, y)
    half_log_det = float(np.sum(np.log(np.diagonal(factor[0]))))
    return -0.5 * float(y @ alpha) - half_log_det - 0.5 * y.size * np.log(2.0 * np.pi)


def log_marginal_likelihood(
    A: np.ndarray, g: np.ndarray, theta: Tuple[float, float, float]
) -> float:
    """
    Returns log p(g | A, theta) of a zero mean process.

    Arguments
    =========
     - A: The inputs, one row per point.
     - g: The outputs, used as given.
     - theta: The hyperparameters (nu, eta, noise).

    Exceptions
    ==========
    An IllConditionedKernelError is raised if the kernel matrix cannot be
    factorised.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    nu, eta, noise = theta
    factor, _ = _factorize(A, nu, eta, noise)
    return _log_likelihood(np.asarray(g, dtype=float), factor)


def _condition(
    A: np.ndarray,
    y: np.ndarray,
    mean: float,
    scale: float,
    theta: Tuple[float, float, float],
) -> GpModel:
    """
    Builds the GpModel of standardised outputs y for fixed hyperparameters.
    """
    nu, eta, noise = theta
    factor, jitter = _factorize(A, nu, eta, noise)
    return GpModel(
        inputs=A,
        outputs=y,
        output_mean=mean,
        output_scale=scale,
        nu=nu,
        eta=eta,
        noise=noise,
        factor=factor,
        alpha=linalg.cho_solve(factor, y),
        jitter=jitter,
    )


def _standardise(
    A: np.ndarray, g: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, float, float]:
    """
    Checks the training data and returns (A, y, mean, scale) with y the
    standardised outputs. Constant outputs keep a unit scale.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    g = np.asarray(g, dtype=float)
    if A.shape[0] != g.shape[0] or g.ndim != 1 or g.size == 0:
        raise ConfigurationError(f"Cannot fit {g.shape} outputs on {A.shape} inputs.")
    mean = float(np.mean(g))
    scale = float(np.std(g))
    if not scale > 0.0:
        scale = 1.0
    return A, (g - mean) / scale, mean, scale


def gp_condition(
    A: np.ndarray, g: np.ndarray, theta: Tuple[float, float, float]
) -> GpModel:
    """
    Conditions the process on the data for fixed hyperparameters (nu, eta,
    noise), the outputs being standardised as in gp_fit. A zero noise is
    accepted here.
    """
    nu, eta, noise = theta
    _check_theta(nu, eta)
    if noise < 0.0:
        raise ConfigurationError(f"The noise must not be negative, got {noise}.")
    A, y, mean, scale = _standardise(A, g)
    return _condition(A, y, mean, scale, (nu, eta, noise))


def gp_fit(
    A: np.ndarray,
    g: np.ndarray,
    nus: Sequence[float] = NU_VALUES,
    starts: int = 8,
    max_evaluations: int = 60,
) -> GpModel:
    """
    Fits a Gaussian process by maximising the log marginal likelihood.

    The outputs are standardised first. For every nu, bounded Powell searches
    over (log eta, log noise) start from the first Sobol points of the box
    and the best hyperparameters over all of them are kept.

    Arguments
    =========
     - A: The inputs, one row per point, scaled to the unit box.
     - g: The raw outputs.
     - nus: The smoothness values tried.
     - starts: The number of local searches per nu.
     - max_evaluations: The budget of every local search.

    Returns
    =======
    The fitted GpModel. A single point gets the default hyperparameters.
    """
    A, y, mean, scale = _standardise(A, g)
    if y.size == 1:
        return _condition(A, y, mean, scale, DEFAULT_THETA)

    low = np.log([ETA_BOUNDS[0], NOISE_BOUNDS[0]])
    high = np.log([ETA_BOUNDS[1], NOISE_BOUNDS[1]])
    initial = low + sobol_points(2, starts) * (high - low)

    best_value, best_theta = -np.inf, None
    for nu in nus:
        _check_theta(nu, 1.0)

        def negative(log_theta: np.ndarray) -> float:
            eta, noise = np.exp(log_theta)
            try:
                factor, _ = _factorize(A, nu, float(eta), float(noise))
            except IllConditionedKernelError:
                return 1e10
            return -_log_likelihood(y, factor)

        for start in initial:
            result = minimize(
                negative,
                start,
                method="Powell",
                bounds=list(zip(low, high)),
                options={"maxfev": max_evaluations, "xtol": 1e-3, "ftol": 1e-8},
            )
            value = -float(result.fun)
            if value > best_value:
                best_value = value
                eta, noise = np.exp(result.x)
                best_theta = (nu, float(eta), float(noise))
    if best_theta is None:
        raise IllConditionedKernelError("Every likelihood search failed.")
    logger.debug("gp fit: theta = %s, log likelihood = %.6e", best_theta, best_value)
    return _condition(A, y, mean, scale, best_theta)


def gp_predict(
    model: GpModel,
    A_star: np.ndarray,
    full_cov: bool = True,
    standardised: bool = False,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Returns the posterior mean and covariance at the test inputs.

    Arguments
    =========
     - model: The fitted GpModel.
     - A_star: The test inputs, one row per point, clamped to the unit box.
     - full_cov: Whether the full covariance matrix is returned, or only
        its diagonal.
     - standardised: Whether the results stay in standardised units.

    Returns
    =======
    The mean vector and the covariance matrix (or variance vector), with
    variances clipped at zero.
    """
    A_star = np.atleast_2d(np.asarray(A_star, dtype=float))
    if A_star.shape[1] != model.inputs.shape[1]:
        raise ConfigurationError(
            f"Test inputs of dimension {A_star.shape[1]} for a model of "
            f"dimension {model.inputs.shape[1]}."
        )
    clamped = np.clip(A_star, 0.0, 1.0)
    if np.any(clamped != A_star):
        logger.warning("gp test inputs clamped to the unit box")
    cross = kernel_matrix(clamped, model.inputs, model.nu, model.eta)
    mean = cross @ model.alpha
    solved = linalg.cho_solve(model.factor, cross.T)
    if full_cov:
        cov = kernel_matrix(clamped, clamped, model.nu, model.eta) - cross @ solved
        diagonal = np.diag_indices_from(cov)
        cov[diagonal] = np.maximum(cov[diagonal], 0.0)
    else:
        cov = np.maximum(1.0 - np.sum(cross * solved.T, axis=1), 0.0)
    if standardised:
        return mean, cov
    return (
        model.output_mean + model.output_scale * mean,
        model.output_scale ** 2 * cov,
    )


##################################### MAIN #####################################

if __name__ == "__main__":
    # The code to run when this file is used as a script goes here
    pass

##################################### EOF ######################################
