#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
from typing import Callable, List, Optional  # Used for type hints
from typing import Sequence, Tuple, Union  # Used for type hints
from concurrent.futures import ThreadPoolExecutor  # Used for the Pareto sweeps
from dataclasses import dataclass, field, replace  # Used for the records
import logging  # Used for diagnostics
import math  # Used for the NaN placeholders


# External imports
import numpy as np  # Used for the array algebra
from scipy.optimize import minimize  # Used to refine the acquisition maximum
from scipy.stats import norm  # Used for the expected improvement


# Internal imports
from trussbuckle.errors import BuckleError, ConfigurationError
from trussbuckle.iobjective import Evaluation, IObjective
from trussbuckle.model import TrussModel, volume
from trussbuckle.sampling import (
    SOBOL,
    ImperfectionDistribution,
    buckling_statistics,
    empirical_moments,
    sobol_points,
)
from trussbuckle.stability import ModeBasis, SolverSettings, imperfection_modes
from trussbuckle.surrogate import GpModel, gp_fit, gp_predict
from trussbuckle.writer import Writer

################################### CLASSES ####################################

logger = logging.getLogger(__name__)

# Objective of infeasible or failed designs, below any normalised value.
PENALTY = -10.0
# Exploration offset of the expected improvement, in units of the standard
# deviation of the observed objective values.
XI = 0.01

WEIGHTED = "weighted"
MEAN = "mean"
STD = "std"


@dataclass(frozen=True)
class RobustProblem:
    """
    Robust sizing: maximise alpha.mean/mean* - (1 - alpha).std/std* of the
    critical load at the volume of the initial design. The last group area
    is eliminated through the volume constraint.
    """

    model: TrussModel
    # Imperfection modes of the as-designed truss, fixed over the run.
    distribution: ImperfectionDistribution
    alpha: float = 0.5
    # Normalisers of the mean and of the standard deviation.
    mean_star: float = 1.0
    std_star: float = 1.0
    # Half the number of imperfection samples per design.
    m: int = 64
    # WEIGHTED, MEAN (maximise the mean) or STD (maximise the std).
    mode: str = WEIGHTED
    settings: SolverSettings = field(default_factory=SolverSettings)
    sampler: str = SOBOL
    workers: int = 1

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigurationError(f"alpha must lie in [0, 1], got {self.alpha}.")
        if not (self.mean_star > 0.0 and self.std_star > 0.0):
            raise ConfigurationError("The normalisers must be positive.")
        if self.mode not in (WEIGHTED, MEAN, STD):
            raise ConfigurationError(f"Unknown objective mode {self.mode!r}.")
        if self.m < 1:
            raise ConfigurationError("m must be positive.")

    @property
    def eliminated(self) -> int:
        """
        The index of the group whose area follows from the volume.
        """
        return self.model.n_g - 1

    @property
    def dimension(self) -> int:
        """
        The number of free design variables.
        """
        return self.model.n_g - 1

    @property
    def V0(self) -> float:
        """
        The prescribed volume, the one of the initial design.
        """
        return volume(self.model.a_init, self.model)

    @property
    def lower(self) -> np.ndarray:
        """
        The lower bounds of the free design variables.
        """
        return self.model.a_min[: self.eliminated]

    @property
    def upper(self) -> np.ndarray:
        """
        The upper bounds of the free design variables.
        """
        return self.model.a_max[: self.eliminated]

    def to_design(self, z: np.ndarray) -> np.ndarray:
        """
        Maps unit box coordinates to the free design variables.
        """
        return self.lower + np.asarray(z, dtype=float) * (self.upper - self.lower)

    def to_unit(self, a_reduced: np.ndarray) -> np.ndarray:
        """
        Maps free design variables to unit box coordinates, 0 along
        collapsed bounds.
        """
        width = self.upper - self.lower
        safe = np.where(width > 0.0, width, 1.0)
        return np.where(width > 0.0, (np.asarray(a_reduced) - self.lower) / safe, 0.0)


class OptimizationHistory:
    """
    The evaluations of a Bayesian optimisation run, in order, with the
    incumbent and the trajectory of the search window.
    """

    def __init__(self):
        """
        Constructor of the OptimizationHistory class.
        """
        self.evaluations: List[Evaluation] = list()
        # Index of the best evaluation so far, None before the first one.
        self.incumbent_index: Optional[int] = None
        # Whether each evaluation improved on the incumbent.
        self.improved: List[bool] = list()
        # The search window after every round, (d x 2) arrays.
        self.bounds: List[np.ndarray] = list()
        # Consecutive evaluations without improvement.
        self.stall = 0

    def __len__(self) -> int:
        return len(self.evaluations)

    @property
    def counter(self) -> int:
        """
        The number of evaluations.
        """
        return len(self.evaluations)

    @property
    def incumbent(self) -> Evaluation:
        """
        The best evaluation so far.
        """
        # Sanity check
        assert self.incumbent_index is not None
        return self.evaluations[self.incumbent_index]

    def record(self, evaluation: Evaluation) -> bool:
        """
        Appends an evaluation and returns True if it became the incumbent.
        """
        self.evaluations.append(evaluation)
        better = self.incumbent_index is None or evaluation.g > self.incumbent.g
        if better:
            self.incumbent_index = len(self.evaluations) - 1
            self.stall = 0
        else:
            self.stall += 1
        self.improved.append(better)
        return better

    def incumbent_trajectory(self) -> List[np.ndarray]:
        """
        Returns the successive incumbent points, in unit coordinates.
        """
        return [
            evaluation.z
            for evaluation, better in zip(self.evaluations, self.improved)
            if better
        ]

    def best_values(self) -> np.ndarray:
        """
        Returns the running maximum of g.
        """
        return np.maximum.accumulate(np.array([e.g for e in self.evaluations]))

    def table(self) -> Writer:
        """
        Returns a Writer of the evaluations: index, g, mean, std, feasible,
        failed and the design.
        """
        width = max(
            (len(e.design) for e in self.evaluations if e.design is not None),
            default=0,
        )
        header = ["evaluation", "g", "mean", "std", "feasible", "failed"]
        table = Writer(header + [f"a{index}" for index in range(width)])
        for index, evaluation in enumerate(self.evaluations):
            design = [] if evaluation.design is None else list(evaluation.design)
            design += [None] * (width - len(design))
            table.log(
                [
                    index,
                    evaluation.g,
                    evaluation.mean,
                    evaluation.std,
                    evaluation.feasible,
                    evaluation.failed,
                ]
                + design
            )
        return table


@dataclass(frozen=True)
class DomainReduction:
    """
    Constants of the sequential domain reduction.
    """

    # Window factor when the incumbent oscillates.
    contraction: float = 0.9
    # Window factor every patience rounds without improvement.
    zoom: float = 0.7
    patience: int = 5
    # Smallest window width, in unit coordinates.
    min_width: float = 0.05


class RobustObjective(IObjective):
    """
    The robust truss objective seen by the Bayesian optimiser.
    """

    def __init__(self, problem: RobustProblem):
        """
        Constructor of the RobustObjective class.

        Arguments
        =========
         - problem: The RobustProblem to optimise.
        """
        self.problem = problem

    @property
    def dimension(self) -> int:
        return self.problem.dimension

    def evaluate(self, z: np.ndarray) -> Evaluation:
        return _evaluate_design(self.problem.to_design(z), self.problem, np.asarray(z))

    def initial_point(self) -> Optional[np.ndarray]:
        problem = self.problem
        return problem.to_unit(problem.model.a_init[: problem.eliminated])

    def is_degenerate(self) -> bool:
        collapsed = np.all(self.problem.upper <= self.problem.lower)
        return self.dimension == 0 or bool(collapsed)


class FunctionObjective(IObjective):
    """
    A plain function of the unit box, the design being the point itself.
    """

    def __init__(self, function: Callable[[np.ndarray], float], dimension: int):
        """
        Constructor of the FunctionObjective class.

        Arguments
        =========
         - function: The function to maximise.
         - dimension: The dimension of its domain.
        """
        self.function = function
        self._dimension = dimension

    @property
    def dimension(self) -> int:
        return self._dimension

    def evaluate(self, z: np.ndarray) -> Evaluation:
        z = np.asarray(z, dtype=float)
        return Evaluation(z=z, design=z, g=float(self.function(z)))


@dataclass(frozen=True)
class ParetoPoint:
    """
    The optimum of one weight alpha.
    """

    alpha: float
    mean: float
    std: float
    g: float
    design: Optional[np.ndarray]
    failed: bool = False


################################## FUNCTIONS ###################################


def make_problem(
    model: TrussModel,
    n_b: int,
    sigma_beta: Union[float, Sequence[float]],
    settings: Optional[SolverSettings] = None,
    mode_numbers: Optional[Sequence[int]] = None,
    **options,
) -> RobustProblem:
    """
    Builds a RobustProblem, the imperfection modes being those of the initial
    design.

    Arguments
    =========
     - model: The truss.
     - n_b: The number of imperfection modes.
     - sigma_beta: The standard deviation of the mode amplitudes.
     - settings: The solver settings.
     - mode_numbers: The 1-based numbers of the imperfection modes, which
        replace the n_b leading ones when set.
     - options: The other RobustProblem fields.
    """
    if settings is None:
        settings = SolverSettings()
    modes: ModeBasis = imperfection_modes(
        model, model.a_init, n_b, mode_numbers, settings.continuation
    )
    distribution = ImperfectionDistribution(
        modes=modes, sigma=np.asarray(sigma_beta, dtype=float)
    )
    return RobustProblem(
        model=model, distribution=distribution, settings=settings, **options
    )


def eliminate_volume_constraint(
    a_reduced: np.ndarray, problem: RobustProblem
) -> Optional[np.ndarray]:
    """
    Completes the free areas with the area of the eliminated group that keeps
    the volume at V0.

    Returns
    =======
    The full area vector, or None if the eliminated area leaves its bounds.
    """
    a_reduced = np.asarray(a_reduced, dtype=float)
    if a_reduced.shape != (problem.dimension,):
        raise ConfigurationError(
            f"Expected {problem.dimension} free areas, got {a_reduced.shape}."
        )
    lengths = problem.model.group_lengths
    index = problem.eliminated
    a_last = (problem.V0 - float(a_reduced @ lengths[:index])) / lengths[index]
    low, high = problem.model.a_min[index], problem.model.a_max[index]
    slack = 1e-12 * high
    if not low - slack <= a_last <= high + slack:
        return None
    return np.append(a_reduced, min(max(a_last, low), high))


def _objective_value(problem: RobustProblem, mean: float, std: float) -> float:
    """
    The objective of a design with the given moments.
    """
    if problem.mode == MEAN:
        return mean
    if problem.mode == STD:
        return std
    return (
        problem.alpha * mean / problem.mean_star
        - (1.0 - problem.alpha) * std / problem.std_star
    )


def _evaluate_design(
    a_reduced: np.ndarray, problem: RobustProblem, z: Optional[np.ndarray] = None
) -> Evaluation:
    """
    Evaluates the free areas a_reduced, a penalty for infeasible or failed
    designs.
    """
    if z is None:
        z = problem.to_unit(a_reduced)
    a_full = eliminate_volume_constraint(a_reduced, problem)
    if a_full is None:
        logger.info("design %s is infeasible", np.array2string(np.asarray(a_reduced)))
        return Evaluation(z=z, design=None, g=PENALTY, feasible=False)
    try:
        samples = buckling_statistics(
            problem.model,
            a_full,
            problem.distribution,
            problem.m,
            problem.settings,
            sampler=problem.sampler,
            workers=problem.workers,
        )
    except BuckleError as error:
        logger.warning("design %s failed: %s", np.array2string(a_full), error)
        return Evaluation(z=z, design=a_full, g=PENALTY, failed=True)
    mean, std = empirical_moments(samples)
    g = _objective_value(problem, mean, std)
    logger.info(
        "design %s: mean %.6e, std %.6e, g %.6e",
        np.array2string(a_full),
        mean,
        std,
        g,
    )
    return Evaluation(z=z, design=a_full, g=g, mean=mean, std=std)


def robust_objective(
    a_reduced: np.ndarray, problem: RobustProblem
) -> Tuple[float, float, float]:
    """
    Returns (g, mean, std) of the free areas a_reduced. Infeasible and failed
    designs get g = PENALTY and NaN moments.
    """
    evaluation = _evaluate_design(np.asarray(a_reduced, dtype=float), problem)
    return evaluation.g, evaluation.mean, evaluation.std


def ei_from_moments(
    mean: np.ndarray, std: np.ndarray, g_best: float, xi: float = XI
) -> np.ndarray:
    """
    Expected improvement over g_best of a Gaussian N(mean, std^2), the
    positive part of the shift when std is zero.
    """
    mean = np.asarray(mean, dtype=float)
    std = np.asarray(std, dtype=float)
    delta = mean - g_best - xi
    with np.errstate(divide="ignore", invalid="ignore"):
        z = delta / std
        value = delta * norm.cdf(z) + std * norm.pdf(z)
    return np.where(std > 0.0, np.maximum(value, 0.0), np.maximum(delta, 0.0))


def expected_improvement(
    gp: GpModel, a: np.ndarray, g_best: float, xi: float = XI
) -> np.ndarray:
    """
    Returns the expected improvement of the posterior of gp at the points a
    (one row per point). The offset xi is scaled by the spread of the
    training outputs, so it does not depend on the units of the objective.
    """
    mean, variance = gp_predict(gp, a, full_cov=False)
    return ei_from_moments(mean, np.sqrt(variance), g_best, xi * gp.output_scale)


def compass_search(
    score: Callable[[np.ndarray], np.ndarray],
    points: np.ndarray,
    low: np.ndarray,
    high: np.ndarray,
    iterations: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Bounded compass search run from every row of points at once.

    Each iteration tries a step up and down every variable of nonzero width
    and keeps the moves that raise the score. The step of a point starts at
    a quarter of the box and halves after an iteration without a move.

    Arguments
    =========
     - score: Maps an (n x d) array of points to their n scores.
     - points: The (n x d) starting points, inside the box.
     - low, high: The bounds of the box.
     - iterations: The number of iterations.

    Returns
    =======
    The refined points and their scores.
    """
    points = np.array(points, dtype=float)
    values = np.asarray(score(points), dtype=float)
    width = high - low
    step = np.full(points.shape[0], 0.25)
    for _ in range(iterations):
        moved = np.zeros(points.shape[0], dtype=bool)
        for k in np.flatnonzero(width > 0.0):
            for sign in (1.0, -1.0):
                trial = points.copy()
                trial[:, k] = np.clip(
                    points[:, k] + sign * step * width[k], low[k], high[k]
                )
                trial_values = np.asarray(score(trial), dtype=float)
                better = trial_values > values
                points[better] = trial[better]
                values[better] = trial_values[better]
                moved |= better
        step = np.where(moved, step, step / 2.0)
    return points, values


def maximize_acquisition(
    gp: GpModel,
    bounds: np.ndarray,
    g_best: float,
    xi: float = XI,
    rng: Optional[np.random.Generator] = None,
    candidates: int = 1024,
    iterations: int = 64,
) -> np.ndarray:
    """
    Returns the point of the box bounds where the expected improvement is
    largest.

    The candidates are Sobol points shifted by a random offset drawn from
    rng. Every candidate is refined by a bounded compass search, and the
    best refined point is polished by a bounded Powell search.

    Arguments
    =========
     - gp: The fitted GpModel.
     - bounds: The (d x 2) box searched.
     - g_best: The incumbent value.
     - xi: The exploration offset.
     - rng: The generator of the offset, a fixed one when None.
     - candidates: The number of Sobol candidates.
     - iterations: The iteration budget of the refinements.
    """
    bounds = np.atleast_2d(np.asarray(bounds, dtype=float))
    low, high = bounds[:, 0], bounds[:, 1]
    if rng is None:
        rng = np.random.default_rng(0)
    dimension = bounds.shape[0]
    shift = rng.random(dimension)
    unit = np.mod(sobol_points(dimension, candidates) + shift, 1.0)
    points = low + unit * (high - low)

    free = high > low
    if not np.any(free):
        return low.copy()

    def score(batch: np.ndarray) -> np.ndarray:
        return expected_improvement(gp, batch, g_best, xi)

    points, scores = compass_search(score, points, low, high, iterations)
    index = int(np.argmax(scores))
    best_point, best_score = points[index], float(scores[index])

    def negative(w: np.ndarray) -> float:
        point = best_point.copy()
        point[free] = w
        return -float(score(point[None, :])[0])

    result = minimize(
        negative,
        best_point[free],
        method="Powell",
        bounds=list(zip(low[free], high[free])),
        options={"maxiter": iterations, "xtol": 1e-6, "ftol": 1e-12},
    )
    if -float(result.fun) > best_score:
        polished = best_point.copy()
        polished[free] = np.clip(result.x, low[free], high[free])
        return polished
    return best_point


def domain_reduction_update(
    history: OptimizationHistory,
    bounds: np.ndarray,
    reduction: Optional[DomainReduction] = None,
) -> np.ndarray:
    """
    Moves and resizes the search window around the incumbent.

    The window is centred on the incumbent. When the incumbent just moved and
    its last two moves point opposite ways along a variable the window
    shrinks by the contraction factor in that variable, when they agree it
    only pans. Every patience evaluations without improvement it zooms. A
    variable whose window reached the minimum width is left untouched.

    Arguments
    =========
     - history: The evaluations so far, points in unit coordinates.
     - bounds: The current (d x 2) window.
     - reduction: The constants of the scheme.

    Returns
    =======
    The new window, inside [0, 1]^d.
    """
    if reduction is None:
        reduction = DomainReduction()
    bounds = np.atleast_2d(np.asarray(bounds, dtype=float))
    if len(history) < 2:
        return bounds.copy()
    low, high = bounds[:, 0], bounds[:, 1]
    width = high - low
    centre = np.asarray(history.incumbent.z, dtype=float)
    factor = np.ones_like(width)
    trajectory = history.incumbent_trajectory()
    if history.improved[-1] and len(trajectory) >= 3:
        latest = trajectory[-1] - trajectory[-2]
        previous = trajectory[-2] - trajectory[-3]
        factor = np.where(latest * previous < 0.0, reduction.contraction, factor)
    if history.stall > 0 and history.stall % reduction.patience == 0:
        factor = factor * reduction.zoom
    floored = width <= reduction.min_width * (1.0 + 1e-12)
    new_width = np.maximum(width * factor, reduction.min_width)
    new_low = np.clip(centre - new_width / 2.0, 0.0, 1.0 - new_width)
    new_high = np.minimum(new_low + new_width, 1.0)
    new_low = np.where(floored, low, new_low)
    new_high = np.where(floored, high, new_high)
    return np.column_stack([new_low, new_high])


def _initial_design(objective: IObjective, n_init: int) -> np.ndarray:
    """
    Returns the initial points: the objective's initial point first, then
    Sobol points.
    """
    points = list()
    start = objective.initial_point()
    if start is not None:
        points.append(np.asarray(start, dtype=float))
    if len(points) < n_init:
        points.extend(sobol_points(objective.dimension, n_init - len(points)))
    return np.array(points[:n_init])


def bayes_optimize(
    problem: Union[RobustProblem, IObjective],
    budget: int,
    n_init: Optional[int] = None,
    seed: int = 0,
    xi: float = XI,
    reduction: Optional[DomainReduction] = None,
) -> Tuple[np.ndarray, OptimizationHistory]:
    """
    Maximises an objective by Bayesian optimisation with expected improvement
    and sequential domain reduction.

    Arguments
    =========
     - problem: A RobustProblem or any IObjective.
     - budget: The total number of evaluations.
     - n_init: The size of the initial design, 5 per variable (at most 20)
        when None.
     - seed: The seed of the acquisition offsets, the only randomness.
     - xi: The exploration offset.
     - reduction: The domain reduction constants.

    Returns
    =======
    The design of the incumbent and the OptimizationHistory.

    Exceptions
    ==========
    A ConfigurationError is raised for inconsistent budgets or if no
    evaluated design was feasible.
    """
    if isinstance(problem, RobustProblem):
        objective = RobustObjective(problem)
    else:
        objective = problem
    history = OptimizationHistory()
    dimension = objective.dimension
    if objective.is_degenerate():
        start = objective.initial_point()
        if start is None:
            start = np.zeros(dimension)
        history.record(objective.evaluate(start))
        return _finish(history)
    if n_init is None:
        n_init = min(max(5 * dimension, 2), 20)
    if not 2 <= n_init <= budget:
        raise ConfigurationError(
            f"Expected 2 <= n_init <= budget, got n_init = {n_init}, budget = {budget}."
        )
    rng = np.random.default_rng(seed)
    bounds = np.column_stack([np.zeros(dimension), np.ones(dimension)])
    for z in _initial_design(objective, n_init):
        history.record(objective.evaluate(z))
    history.bounds.append(bounds)
    while len(history) < budget:
        Z = np.array([evaluation.z for evaluation in history.evaluations])
        G = np.array([evaluation.g for evaluation in history.evaluations])
        low, width = bounds[:, 0], bounds[:, 1] - bounds[:, 0]
        gp = gp_fit((Z - low) / width, G)
        unit_box = np.column_stack([np.zeros(dimension), np.ones(dimension)])
        w = maximize_acquisition(gp, unit_box, history.incumbent.g, xi, rng)
        evaluation = objective.evaluate(low + w * width)
        history.record(evaluation)
        logger.debug(
            "evaluation %d: g = %.6e, incumbent %.6e",
            len(history) - 1,
            evaluation.g,
            history.incumbent.g,
        )
        bounds = domain_reduction_update(history, bounds, reduction)
        history.bounds.append(bounds)
    return _finish(history)


def _finish(history: OptimizationHistory) -> Tuple[np.ndarray, OptimizationHistory]:
    """
    Returns the incumbent design, refusing runs without a feasible one.
    """
    if all(not e.feasible or e.failed for e in history.evaluations):
        raise ConfigurationError("No feasible design was evaluated.")
    return history.incumbent.design, history


def compute_normalizers(
    problem: RobustProblem, budget: int, n_init: Optional[int] = None, seed: int = 0
) -> Tuple[float, float]:
    """
    Returns the largest mean and the largest standard deviation of the
    critical load found by two optimisations.
    """
    _, by_mean = bayes_optimize(replace(problem, mode=MEAN), budget, n_init, seed)
    _, by_std = bayes_optimize(replace(problem, mode=STD), budget, n_init, seed)
    mean_star, std_star = by_mean.incumbent.mean, by_std.incumbent.std
    logger.info("normalisers: mean* = %.6e, std* = %.6e", mean_star, std_star)
    if not (mean_star > 0.0 and std_star > 0.0):
        raise ConfigurationError("The normalisers are not positive.")
    return mean_star, std_star


def pareto_sweep(
    problem: RobustProblem,
    alphas: Sequence[float],
    budget: int,
    n_init: Optional[int] = None,
    seed: int = 0,
    workers: int = 1,
) -> List[ParetoPoint]:
    """
    Optimises the problem for every weight in alphas and returns the optima
    sorted by alpha. A failed weight yields a failed ParetoPoint and the
    sweep goes on.
    """

    def optimise(alpha: float) -> ParetoPoint:
        try:
            design, history = bayes_optimize(
                replace(problem, alpha=alpha, mode=WEIGHTED), budget, n_init, seed
            )
        except BuckleError as error:
            logger.error("alpha = %g failed: %s", alpha, error)
            return ParetoPoint(alpha, math.nan, math.nan, math.nan, None, failed=True)
        best = history.incumbent
        return ParetoPoint(alpha, best.mean, best.std, best.g, design)

    ordered = sorted(float(alpha) for alpha in alphas)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(optimise, ordered))
    return [optimise(alpha) for alpha in ordered]


def pareto_table(front: Sequence[ParetoPoint], n_g: int) -> Writer:
    """
    Returns a Writer of the front: alpha, mean, std, then the design.
    """
    table = Writer(["alpha", "mean", "std"] + [f"a{index}" for index in range(n_g)])
    for point in front:
        design = [None] * n_g if point.design is None else list(point.design)
        table.log([point.alpha, point.mean, point.std] + design)
    return table


def sample_design_space(
    problem: RobustProblem, count: int, seed: int = 0
) -> List[Evaluation]:
    """
    Evaluates count feasible designs spread over the design space, a map of
    the attainable (mean, std) pairs.

    Arguments
    =========
     - problem: The RobustProblem.
     - count: The number of feasible designs wanted.
     - seed: The seed of the random offset of the Sobol points.
    """
    if count < 1:
        raise ConfigurationError("count must be positive.")
    if problem.dimension == 0:
        return [_evaluate_design(np.zeros(0), problem)]
    rng = np.random.default_rng(seed)
    shift = rng.random(problem.dimension)
    points = np.mod(sobol_points(problem.dimension, 8 * count) + shift, 1.0)
    evaluations: List[Evaluation] = list()
    for z in points:
        a_reduced = problem.to_design(z)
        if eliminate_volume_constraint(a_reduced, problem) is None:
            continue
        evaluation = _evaluate_design(a_reduced, problem, z)
        if not evaluation.failed:
            evaluations.append(evaluation)
        if len(evaluations) == count:
            break
    return evaluations


##################################### MAIN #####################################

if __name__ == "__main__":
    # The code to run when this file is used as a script goes here
    pass

##################################### EOF ######################################
