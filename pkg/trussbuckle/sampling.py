#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
from typing import List, Optional, Sequence, Tuple, Union  # Used for type hints
from concurrent.futures import ThreadPoolExecutor  # Used for the branch walks
from dataclasses import dataclass  # Used for the records
import logging  # Used for diagnostics
import warnings  # Used to silence the power of two notice of scipy


# External imports
import numpy as np  # Used for the sample arrays
from scipy.stats import norm, qmc  # Used for the quantiles and Sobol points


# Internal imports
from trussbuckle.errors import ConfigurationError, SamplingError
from trussbuckle.model import TrussModel, apply_imperfection
from trussbuckle.stability import (
    ModeBasis,
    SolverSettings,
    StabilityPoint,
    critical_load,
    is_solver_failure,
    shifted_predictor,
)
from trussbuckle.writer import Writer

################################### CLASSES ####################################

logger = logging.getLogger(__name__)

SOBOL = "sobol"
RANDOM = "random"


class SobolStream:
    """
    An unscrambled Sobol sequence (Joe-Kuo direction numbers) read point by
    point, so that consecutive draws continue the same sequence.
    """

    # Size of the direction number table.
    MAX_DIMENSION = 21201

    def __init__(self, dimension: int, skip_origin: bool = True):
        """
        Constructor of the SobolStream class.

        Arguments
        =========
         - dimension: The dimension of the points.
         - skip_origin: Whether the first point, all zeros, is dropped so that
            the inverse normal transform never sees u = 0.

        Exceptions
        ==========
        A ConfigurationError is raised for a dimension outside the table.
        """
        if not 1 <= dimension <= SobolStream.MAX_DIMENSION:
            raise ConfigurationError(
                f"Sobol dimension must lie in [1, {SobolStream.MAX_DIMENSION}], "
                f"got {dimension}."
            )
        self.dimension = dimension
        self.engine = qmc.Sobol(d=dimension, scramble=False)
        # Position in the sequence: points handed out or skipped so far, the
        # origin included.
        self.index = 0
        if skip_origin:
            self.engine.fast_forward(1)
            self.index = 1

    def skip(self, count: int):
        """
        Drops the next count points.
        """
        if count < 0:
            raise ConfigurationError("Cannot skip a negative number of points.")
        self.engine.fast_forward(count)
        self.index += count

    def draw(self, count: int) -> np.ndarray:
        """
        Returns the next count points as a (count, dimension) array.
        """
        if count < 1:
            raise ConfigurationError("At least one point must be drawn.")
        with warnings.catch_warnings():
            # Prefixes of any length are wanted here.
            warnings.simplefilter("ignore", UserWarning)
            points = self.engine.random(count)
        self.index += count
        return points


@dataclass(frozen=True)
class ImperfectionDistribution:
    """
    Independent Gaussian amplitudes beta_i ~ N(mean_i, sigma_i^2) of the
    buckling modes.
    """

    modes: ModeBasis
    sigma: np.ndarray
    mean: Optional[np.ndarray] = None

    def __post_init__(self):
        sigma = np.atleast_1d(np.asarray(self.sigma, dtype=float))
        if sigma.shape == (1,) and self.modes.n_b > 1:
            sigma = np.full(self.modes.n_b, sigma[0])
        if sigma.shape != (self.modes.n_b,):
            raise ConfigurationError(
                f"Expected {self.modes.n_b} standard deviations, got {sigma.shape}."
            )
        if np.any(sigma <= 0.0):
            raise ConfigurationError(
                "Imperfection standard deviations must be positive."
            )
        mean = np.zeros(self.modes.n_b) if self.mean is None else self.mean
        mean = np.atleast_1d(np.asarray(mean, dtype=float))
        if mean.shape != (self.modes.n_b,):
            raise ConfigurationError(
                f"Expected {self.modes.n_b} means, got {mean.shape}."
            )
        # The dataclass is frozen, the normalised arrays are set once here.
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "mean", mean)

    @property
    def n_b(self) -> int:
        """
        The number of random amplitudes.
        """
        return self.modes.n_b

    def transform(self, u: np.ndarray) -> np.ndarray:
        """
        Maps uniform points (one row per sample) to amplitude vectors.
        """
        return to_gaussian(u, self.mean, self.sigma)


@dataclass(frozen=True)
class BucklingSampleSet:
    """
    The critical loads of 2m imperfect trusses, in draw order.
    """

    # Critical load of the as-designed truss.
    lambda_c0: float
    # One amplitude vector per sample.
    betas: np.ndarray
    # Critical load per sample, NaN where flagged.
    lambdas: np.ndarray
    # Samples that failed both the warm and the cold start.
    flagged: np.ndarray
    sampler: str = SOBOL
    skip: int = 0

    @property
    def n_samples(self) -> int:
        """
        The number of samples, 2m.
        """
        return self.lambdas.shape[0]

    @property
    def valid_lambdas(self) -> np.ndarray:
        """
        The critical loads of the converged samples, in draw order.
        """
        return self.lambdas[~self.flagged]

    def table(self) -> Writer:
        """
        Returns a Writer of the (beta..., lambda_c, flagged) rows.
        """
        header = [f"beta{index}" for index in range(self.betas.shape[1])]
        table = Writer(header + ["lambda_c", "flagged"])
        for beta, lam, flagged in zip(self.betas, self.lambdas, self.flagged):
            table.log(beta.tolist() + [float(lam), bool(flagged)])
        return table


################################## FUNCTIONS ###################################


def sobol_points(
    dim: int, count: int, skip: int = 0, skip_origin: bool = True
) -> np.ndarray:
    """
    Returns count points of the unscrambled Sobol sequence in dimension dim.

    Arguments
    =========
     - dim: The dimension.
     - count: The number of points.
     - skip: The number of points dropped before the first returned one.
     - skip_origin: Whether the all zeros point is dropped first.

    Returns
    =======
    A (count, dim) array of points in [0, 1).
    """
    stream = SobolStream(dim, skip_origin=skip_origin)
    if skip:
        stream.skip(skip)
    return stream.draw(count)


def to_gaussian(
    u: Union[float, np.ndarray],
    mean: Union[float, np.ndarray] = 0.0,
    std: Union[float, np.ndarray] = 1.0,
) -> Union[float, np.ndarray]:
    """
    Inverse transform sampling: returns mean + std.Q(u) with Q the standard
    normal quantile.

    Exceptions
    ==========
    A ConfigurationError is raised if u is outside the open interval (0, 1).
    """
    values = np.asarray(u, dtype=float)
    if np.any(values <= 0.0) or np.any(values >= 1.0) or np.any(np.isnan(values)):
        raise ConfigurationError(
            "Uniform samples must lie in the open interval (0, 1)."
        )
    result = np.asarray(mean) + np.asarray(std) * norm.ppf(values)
    if np.ndim(result) == 0:
        return float(result)
    return result


def _uniform_points(
    dim: int, count: int, sampler: str, seed: Optional[int], skip: int
) -> np.ndarray:
    """
    Returns the uniform points feeding the amplitude transform.
    """
    if sampler == SOBOL:
        return sobol_points(dim, count, skip=skip)
    if sampler == RANDOM:
        generator = np.random.default_rng(seed)
        points = generator.random((count, dim))
        # random() may return 0 exactly.
        return np.clip(points, np.finfo(float).tiny, None)
    raise ConfigurationError(f"Unknown sampler {sampler!r}.")


def _walk_branch(
    model: TrussModel,
    a: np.ndarray,
    modes: ModeBasis,
    betas: np.ndarray,
    indices: Sequence[int],
    baseline: StabilityPoint,
    settings: SolverSettings,
) -> List[Tuple[int, float]]:
    """
    Computes the critical loads of the samples in the order of indices, each
    extended system being started from the previous converged point moved
    by the geometry change. critical_load retries a failed warm start from
    scratch, a failed retry yields NaN.
    """
    Phi_free = modes.restricted(model)
    results: List[Tuple[int, float]] = list()
    previous, previous_beta = baseline, np.zeros(modes.n_b)
    for index in indices:
        beta = betas[index]
        imperfect = model.with_coordinates(
            apply_imperfection(model.X0, modes.Phi, beta)
        )
        predictor = shifted_predictor(previous, Phi_free @ (beta - previous_beta))
        try:
            point = critical_load(imperfect, a, settings, warm=predictor)
        except Exception as error:
            if not is_solver_failure(error):
                raise
            logger.warning("sample %d: no stability point (%s)", index, error)
            results.append((index, float("nan")))
            continue
        results.append((index, point.lam))
        previous, previous_beta = point, beta
    return results


def buckling_statistics(
    model: TrussModel,
    a: np.ndarray,
    dist: ImperfectionDistribution,
    m: int,
    settings: Optional[SolverSettings] = None,
    sampler: str = SOBOL,
    seed: Optional[int] = None,
    skip: int = 0,
    workers: int = 1,
    max_flag_rate: float = 0.01,
    baseline: Optional[StabilityPoint] = None,
) -> BucklingSampleSet:
    """
    Computes the critical loads of 2m imperfect trusses.

    The amplitude samples are split on the sign of their first component.
    Each branch is walked from the as-designed stability point by increasing
    norm of the amplitudes, so that consecutive geometries stay close and
    every stability point predicts the next one.

    Arguments
    =========
     - model: The as-designed truss.
     - a: The group areas.
     - dist: The amplitude distribution.
     - m: Half the number of samples.
     - settings: The solver settings.
     - sampler: SOBOL, or RANDOM for pseudorandom points from seed.
     - seed: The seed of the RANDOM sampler.
     - skip: The number of Sobol points dropped first.
     - workers: 2 walks both branches concurrently.
     - max_flag_rate: The largest tolerated share of failed samples.
     - baseline: The as-designed stability point, computed if None.

    Returns
    =======
    The BucklingSampleSet, samples in draw order.

    Exceptions
    ==========
    A SamplingError is raised if more than max_flag_rate of the samples
    failed both starts.
    """
    if m < 1:
        raise ConfigurationError("m must be positive.")
    if settings is None:
        settings = SolverSettings()
    count = 2 * m
    betas = dist.transform(_uniform_points(dist.n_b, count, sampler, seed, skip))
    if baseline is None:
        baseline = critical_load(model, a, settings)

    key = betas[:, 0]
    radius = np.linalg.norm(betas, axis=1)
    branches = list()
    for members in (np.flatnonzero(key >= 0.0), np.flatnonzero(key < 0.0)):
        branches.append(members[np.argsort(radius[members], kind="stable")])
    # Sanity check, the branches partition the samples.
    assert sum(branch.size for branch in branches) == count

    def walk(branch: np.ndarray) -> List[Tuple[int, float]]:
        return _walk_branch(model, a, dist.modes, betas, branch, baseline, settings)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=2) as executor:
            outcomes = list(executor.map(walk, branches))
    else:
        outcomes = [walk(branch) for branch in branches]

    lambdas = np.full(count, np.nan)
    for outcome in outcomes:
        for index, lam in outcome:
            lambdas[index] = lam
    flagged = np.isnan(lambdas)
    n_flagged = int(np.count_nonzero(flagged))
    if n_flagged > max_flag_rate * count:
        raise SamplingError(f"{n_flagged} of {count} samples failed to converge.")
    logger.info(
        "buckling statistics: %d samples, %d flagged, baseline %.6e",
        count,
        n_flagged,
        baseline.lam,
    )
    return BucklingSampleSet(
        lambda_c0=baseline.lam,
        betas=betas,
        lambdas=lambdas,
        flagged=flagged,
        sampler=sampler,
        skip=skip,
    )


def empirical_moments(
    samples: Union[BucklingSampleSet, Sequence[float], np.ndarray]
) -> Tuple[float, float]:
    """
    Returns the mean and the standard deviation (divisor n - 1) of the
    critical loads, the as-designed one excluded.
    """
    if isinstance(samples, BucklingSampleSet):
        values = samples.valid_lambdas
    else:
        values = np.asarray(samples, dtype=float)
    if values.size == 0:
        raise ConfigurationError("Cannot compute the moments of an empty sample.")
    if values.size == 1:
        return float(values[0]), 0.0
    return float(np.mean(values)), float(np.std(values, ddof=1))


def setwise_moments(
    samples: BucklingSampleSet, set_size: int = 128
) -> List[Tuple[int, float, float]]:
    """
    Returns the (sets, mean, std) estimates over the first k consecutive sets
    of set_size samples in draw order, for k = 1, 2, ... while full sets
    remain.
    """
    if set_size < 2:
        raise ConfigurationError("Sets must hold at least two samples.")
    estimates = list()
    for sets in range(1, samples.n_samples // set_size + 1):
        head = samples.lambdas[: sets * set_size]
        mean, std = empirical_moments(head[~np.isnan(head)])
        estimates.append((sets, mean, std))
    return estimates


##################################### MAIN #####################################

if __name__ == "__main__":
    # The code to run when this file is used as a script goes here
    pass

##################################### EOF ######################################
