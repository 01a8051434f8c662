#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
from typing import Iterator, List, Optional, Tuple  # Used for type hints
from dataclasses import dataclass, field, replace  # Used for the records
import logging  # Used for diagnostics
import math  # Used for scalar square roots


# External imports
import numpy as np  # Used for the vector algebra


# Internal imports
from trussbuckle.errors import (
    ConfigurationError,
    ConvergenceError,
    CriticalPointNotFoundError,
    SingularGeometryError,
    SingularMatrixError,
    StepTooSmallError,
)
from trussbuckle.factorization import factorize_symmetric
from trussbuckle.model import TrussModel, orient, residual, tangent_stiffness
from trussbuckle.writer import Writer

################################### CLASSES ####################################

logger = logging.getLogger(__name__)

# The two path-following constraints.
LOAD_CONTROL = "load-control"
ARC_LENGTH = "arc-length"

# Multiple of the machine epsilon in the rounding floor of the residual.
ROUNDING_ULPS = 64.0


@dataclass(frozen=True)
class ContinuationSettings:
    """
    Settings of the Newton solves and of the path-following.
    """

    # Constraint used after the first (load-controlled) step.
    kind: str = ARC_LENGTH
    # First load increment, chosen from the linear response when None.
    initial_step: Optional[float] = None
    # Linear displacement of the automatic first step, relative to the size
    # of the truss.
    first_step_displacement: float = 2e-3
    # Bounds of the arc length relative to the first step. The upper bound
    # also caps the displacement of a step relative to the first one.
    min_step_ratio: float = 1e-6
    max_step_ratio: float = 8.0
    # Relative equilibrium tolerance, scaled by ||f||.max(|lambda|, 1) and
    # never below the rounding floor of the residual.
    newton_tol: float = 1e-10
    max_iterations: int = 20
    max_steps: int = 300
    # Newton iterations aimed at by the step adaptation.
    target_iterations: int = 5
    max_halvings: int = 8
    # Smallest pivot ratio that triggers the switch to the extended system.
    switch_ratio: float = 0.2
    # Tracing stops beyond this load parameter, if set.
    lambda_max: Optional[float] = None
    # Load scaling of the spherical constraint, 1/||f|| when None.
    psi: Optional[float] = None

    def __post_init__(self):
        if self.kind not in (LOAD_CONTROL, ARC_LENGTH):
            raise ConfigurationError(f"Unknown continuation kind {self.kind!r}.")
        if self.newton_tol <= 0.0 or self.switch_ratio <= 0.0:
            raise ConfigurationError("Continuation tolerances must be positive.")
        if not 0.0 < self.min_step_ratio < self.max_step_ratio:
            raise ConfigurationError("Continuation step bounds must be ordered.")
        if self.max_iterations < 1 or self.max_steps < 1:
            raise ConfigurationError("Iteration and step limits must be positive.")


@dataclass(frozen=True)
class PathPoint:
    """
    A converged equilibrium state on the traced path.
    """

    # Free positions.
    x: np.ndarray
    # Load parameter.
    lam: float
    # Negative pivots of K at the state.
    negative_pivots: int
    # log|det K| at the state.
    log_abs_det: float
    step_index: int = 0
    # Newton iterations spent to reach the state.
    iterations: int = 0
    # Smallest pivot magnitude of K at the state.
    min_pivot: float = math.nan
    # Residual norm of every iterate, the last one converged.
    residual_history: Tuple[float, ...] = field(default_factory=tuple)
    # (dx, dlambda) from the previous point, None for a start point.
    increment: Optional[np.ndarray] = None


################################## FUNCTIONS ###################################


def residual_floor(model: TrussModel, a: np.ndarray) -> float:
    """
    Returns the residual norm rounding alone leaves at any state: a few ulps
    of the force a unit strain gives the stiffest strut, grown with the
    number of struts. Stiff trusses under small loads never get below it.
    """
    rigidity = float(np.max(model.element_areas(a))) * model.E
    return ROUNDING_ULPS * np.finfo(float).eps * rigidity * math.sqrt(model.n_e)


def equilibrium_tolerance(
    model: TrussModel,
    lam: float,
    settings: ContinuationSettings,
    a: Optional[np.ndarray] = None,
) -> float:
    """
    Returns the absolute residual tolerance at the load parameter lam.

    Arguments
    =========
     - model: The truss.
     - lam: The load parameter.
     - settings: The continuation settings.
     - a: The group areas. When given, the tolerance is raised to the
        rounding floor of the residual.
    """
    scale = float(np.linalg.norm(model.f)) * max(abs(lam), 1.0)
    tolerance = settings.newton_tol * max(scale, np.finfo(float).tiny)
    if a is None:
        return tolerance
    return max(tolerance, residual_floor(model, a))


def _arc_weight(model: TrussModel, settings: ContinuationSettings) -> float:
    """
    Returns the weight psi^2.||f||^2 of the load increment in the spherical
    constraint.
    """
    norm_f = float(np.linalg.norm(model.f))
    psi = settings.psi if settings.psi is not None else 1.0 / norm_f
    return (psi * norm_f) ** 2


def _arc_norm(increment: np.ndarray, weight: float) -> float:
    """
    Returns the length of a (dx, dlambda) increment in the arc metric.
    """
    dx = increment[:-1]
    return math.sqrt(float(dx @ dx) + weight * increment[-1] ** 2)


def _converged_point(
    model: TrussModel,
    a: np.ndarray,
    x: np.ndarray,
    lam: float,
    history: List[float],
    step_index: int,
    increment: Optional[np.ndarray],
) -> PathPoint:
    """
    Factorises K at a converged state and packs the PathPoint.
    """
    report = factorize_symmetric(tangent_stiffness(model, x, a))
    return PathPoint(
        x=x,
        lam=float(lam),
        negative_pivots=report.negative,
        log_abs_det=report.log_abs_det,
        step_index=step_index,
        iterations=len(history) - 1,
        min_pivot=report.min_abs_pivot,
        residual_history=tuple(history),
        increment=increment,
    )


def newton_equilibrium(
    model: TrussModel,
    a: np.ndarray,
    lam_target: float,
    x_guess: np.ndarray,
    settings: ContinuationSettings,
) -> PathPoint:
    """
    Solves r(x, lam_target) = 0 by Newton-Raphson iterations at fixed load.

    Arguments
    =========
     - model: The truss.
     - a: The group areas.
     - lam_target: The load parameter.
     - x_guess: The starting free positions.
     - settings: The continuation settings.

    Returns
    =======
    The converged PathPoint, with the inertia of K at the solution.

    Exceptions
    ==========
    A ConvergenceError is raised after settings.max_iterations iterations and
    a SingularMatrixError if K becomes singular at an iterate.
    """
    x = np.array(x_guess, dtype=float)
    tolerance = equilibrium_tolerance(model, lam_target, settings, a)
    history: List[float] = list()
    for iteration in range(settings.max_iterations + 1):
        r = residual(model, x, lam_target, a)
        history.append(float(np.linalg.norm(r)))
        logger.debug("newton %d: |r| = %.3e", iteration, history[-1])
        if history[-1] <= tolerance:
            return _converged_point(model, a, x, lam_target, history, 0, None)
        if iteration == settings.max_iterations:
            break
        report = factorize_symmetric(tangent_stiffness(model, x, a))
        if report.is_singular:
            raise SingularMatrixError(
                f"Singular tangent stiffness at lambda = {lam_target:g}.",
                phase="equilibrium",
            )
        x = x - report.solve(r)
    raise ConvergenceError(
        f"No equilibrium at lambda = {lam_target:g} after "
        f"{settings.max_iterations} iterations (|r| = {history[-1]:.3e})."
    )


def _arc_attempt(
    model: TrussModel,
    a: np.ndarray,
    prev: PathPoint,
    direction: np.ndarray,
    ds: float,
    settings: ContinuationSettings,
) -> PathPoint:
    """
    One arc-length step of length ds from prev, predicted along direction and
    corrected on the sphere ||dx||^2 + psi^2.dlambda^2.||f||^2 = ds^2.
    """
    weight = _arc_weight(model, settings)
    predictor = direction / _arc_norm(direction, weight) * ds
    du = predictor[:-1].copy()
    dl = float(predictor[-1])
    history: List[float] = list()
    for iteration in range(settings.max_iterations + 1):
        x = prev.x + du
        lam = prev.lam + dl
        r = residual(model, x, lam, a)
        history.append(float(np.linalg.norm(r)))
        if history[-1] <= equilibrium_tolerance(model, lam, settings, a):
            increment = np.append(du, dl)
            return _converged_point(
                model, a, x, lam, history, prev.step_index + 1, increment
            )
        if iteration == settings.max_iterations:
            break
        report = factorize_symmetric(tangent_stiffness(model, x, a))
        solved = report.solve(np.column_stack([-r, model.f]))
        du_r, du_f = solved[:, 0], solved[:, 1]
        # Quadratic in the load correction from the spherical constraint.
        base = du + du_r
        a1 = float(du_f @ du_f) + weight
        a2 = 2.0 * float(du_f @ base) + 2.0 * weight * dl
        a3 = float(base @ base) + weight * dl ** 2 - ds ** 2
        discriminant = a2 ** 2 - 4.0 * a1 * a3
        if discriminant < 0.0:
            raise ConvergenceError(
                "The arc-length constraint has no real root.", phase="continuation"
            )
        root = math.sqrt(discriminant)
        best = None
        for correction in ((-a2 + root) / (2.0 * a1), (-a2 - root) / (2.0 * a1)):
            candidate = base + correction * du_f
            # Cosine with the current increment, the root that doubles back
            # loses.
            cosine = float(candidate @ du) + weight * dl * (dl + correction)
            if best is None or cosine > best[0]:
                best = (cosine, candidate, correction)
        du = best[1]
        dl = dl + best[2]
    raise ConvergenceError(
        f"Arc-length corrector stalled (|r| = {history[-1]:.3e}).",
        phase="continuation",
    )


def arc_length_step(
    model: TrussModel,
    a: np.ndarray,
    prev: PathPoint,
    settings: ContinuationSettings,
    ds: float,
    direction: Optional[np.ndarray] = None,
) -> PathPoint:
    """
    Advances the path by the arc length ds from prev, halving ds on failure.

    Arguments
    =========
     - model: The truss.
     - a: The group areas.
     - prev: The converged point to continue from.
     - settings: The continuation settings.
     - ds: The arc length of the step.
     - direction: The (dx, dlambda) predictor direction. Defaults to the
        increment that led to prev (secant), or to the tangent K^-1 f with
        increasing load for a start point.

    Returns
    =======
    The new converged PathPoint, with its increment from prev.

    Exceptions
    ==========
    A StepTooSmallError is raised once settings.max_halvings halvings failed.
    """
    if direction is None:
        if prev.increment is not None:
            direction = prev.increment
        else:
            report = factorize_symmetric(tangent_stiffness(model, prev.x, a))
            direction = np.append(report.solve(model.f), 1.0)
    step = ds
    for halving in range(settings.max_halvings + 1):
        try:
            return _arc_attempt(model, a, prev, direction, step, settings)
        except (ConvergenceError, SingularMatrixError, SingularGeometryError) as error:
            logger.warning(
                "arc-length step %d failed with ds = %.3e (%s), halving.",
                prev.step_index + 1,
                step,
                error,
            )
            step = step / 2.0
    raise StepTooSmallError(
        f"Step {prev.step_index + 1} failed after {settings.max_halvings} halvings."
    )


def _displacement_cap(direction: np.ndarray, weight: float, du_max: float) -> float:
    """
    Returns the arc length at which a step predicted along direction moves
    the nodes by du_max.
    """
    norm_u = float(np.linalg.norm(direction[:-1]))
    if norm_u == 0.0:
        return math.inf
    return du_max * _arc_norm(direction, weight) / norm_u


def _first_load_step(
    model: TrussModel, a: np.ndarray, start: PathPoint, settings: ContinuationSettings
) -> Tuple[float, np.ndarray]:
    """
    Returns the first load increment and the linear response K0^-1 f.
    """
    report = factorize_symmetric(tangent_stiffness(model, start.x, a))
    unit_response = report.solve(model.f)
    if settings.initial_step is not None:
        return settings.initial_step, unit_response
    size = settings.first_step_displacement * model.characteristic_length
    return size / float(np.linalg.norm(unit_response)), unit_response


def walk_path(
    model: TrussModel,
    a: np.ndarray,
    settings: ContinuationSettings,
    x_start: Optional[np.ndarray] = None,
) -> Iterator[PathPoint]:
    """
    Yields the points of the equilibrium path from the unloaded state: a
    load-controlled first step, then steps of the configured kind with the
    step length adapted to the Newton iteration count. The generator never
    ends by itself, the caller decides when to stop.

    Arguments
    =========
     - model: The truss.
     - a: The group areas.
     - settings: The continuation settings.
     - x_start: The unloaded free positions, the reference geometry if None.
    """
    if x_start is None:
        x_start = model.reference_positions()
    start = newton_equilibrium(model, a, 0.0, x_start, settings)
    yield start
    load_step, unit_response = _first_load_step(model, a, start, settings)
    # First step, load controlled with a linear predictor.
    for halving in range(settings.max_halvings + 1):
        try:
            point = newton_equilibrium(
                model, a, load_step, start.x + load_step * unit_response, settings
            )
            break
        except (ConvergenceError, SingularMatrixError, SingularGeometryError) as error:
            logger.warning(
                "first load step %.3e failed (%s), halving.", load_step, error
            )
            load_step = load_step / 2.0
    else:
        raise StepTooSmallError("The first load step failed.")
    increment = np.append(point.x - start.x, load_step)
    point = replace(point, step_index=1, increment=increment)
    yield point

    weight = _arc_weight(model, settings)
    ds = _arc_norm(increment, weight)
    ds_min = settings.min_step_ratio * ds
    ds_max = settings.max_step_ratio * ds
    # Near a limit point the load barely moves and the arc length goes into
    # the displacement, which must not jump over the limit point.
    du_max = settings.max_step_ratio * float(np.linalg.norm(increment[:-1]))
    while True:
        if settings.kind == ARC_LENGTH:
            ds = min(ds, _displacement_cap(point.increment, weight, du_max))
            point = arc_length_step(model, a, point, settings, ds)
            used = _arc_norm(point.increment, weight)
        else:
            point = _load_step(model, a, point, settings, load_step)
            used = abs(float(point.increment[-1]))
        factor = math.sqrt(settings.target_iterations / max(point.iterations, 1))
        if settings.kind == ARC_LENGTH:
            ds = min(max(used * factor, ds_min), ds_max)
        else:
            load_step = min(max(used * factor, ds_min), ds_max)
        logger.debug(
            "step %d: lambda = %.6e, negative pivots = %d, iterations = %d",
            point.step_index,
            point.lam,
            point.negative_pivots,
            point.iterations,
        )
        yield point


def _load_step(
    model: TrussModel,
    a: np.ndarray,
    prev: PathPoint,
    settings: ContinuationSettings,
    load_step: float,
) -> PathPoint:
    """
    One load-controlled step with secant predictor, halving on failure.
    """
    step = load_step
    for halving in range(settings.max_halvings + 1):
        scale = step / float(prev.increment[-1])
        guess = prev.x + scale * prev.increment[:-1]
        try:
            point = newton_equilibrium(model, a, prev.lam + step, guess, settings)
        except (ConvergenceError, SingularMatrixError, SingularGeometryError) as error:
            logger.warning("load step %.3e failed (%s), halving.", step, error)
            step = step / 2.0
            continue
        increment = np.append(point.x - prev.x, step)
        return replace(point, step_index=prev.step_index + 1, increment=increment)
    raise StepTooSmallError(
        f"Load step {prev.step_index + 1} failed after "
        f"{settings.max_halvings} halvings."
    )


def trace_path(
    model: TrussModel,
    a: np.ndarray,
    settings: ContinuationSettings,
    max_steps: Optional[int] = None,
    x_start: Optional[np.ndarray] = None,
) -> List[PathPoint]:
    """
    Traces the equilibrium path and returns all its points, the unloaded one
    first. Tracing stops after max_steps steps (settings.max_steps by
    default) or beyond settings.lambda_max.
    """
    limit = settings.max_steps if max_steps is None else max_steps
    points: List[PathPoint] = list()
    for point in walk_path(model, a, settings, x_start):
        points.append(point)
        if point.step_index >= limit:
            break
        if settings.lambda_max is not None and point.lam > settings.lambda_max:
            break
    return points


def softest_mode(K: np.ndarray) -> np.ndarray:
    """
    Returns the unit eigenvector of the eigenvalue of K closest to zero.
    """
    values, vectors = np.linalg.eigh(K)
    return orient(vectors[:, int(np.argmin(np.abs(values)))])


def trace_until_near_critical(
    model: TrussModel,
    a: np.ndarray,
    settings: ContinuationSettings,
    x_start: Optional[np.ndarray] = None,
) -> Tuple[PathPoint, np.ndarray]:
    """
    Follows the path until the stiffness is about to vanish: the smallest
    pivot dropped below switch_ratio times its unloaded value, or a negative
    pivot appeared.

    Arguments
    =========
     - model: The truss.
     - a: The group areas.
     - settings: The continuation settings.
     - x_start: The unloaded free positions, the reference geometry if None.

    Returns
    =======
    The point where the criterion fired and the unit eigenvector of K for its
    smallest eigenvalue in magnitude, the predictors of the extended system.

    Exceptions
    ==========
    A CriticalPointNotFoundError is raised if the truss is unstable when
    unloaded, or if max_steps or lambda_max are reached first.
    """
    walker = walk_path(model, a, settings, x_start)
    _, point = _walk_to_switch(settings, walker)
    return point, softest_mode(tangent_stiffness(model, point.x, a))


def _check_limits(point: PathPoint, settings: ContinuationSettings):
    """
    Raises a CriticalPointNotFoundError once the walk went beyond max_steps
    or lambda_max.
    """
    if settings.lambda_max is not None and point.lam > settings.lambda_max:
        raise CriticalPointNotFoundError(
            f"No stability point below lambda_max = {settings.lambda_max:g}."
        )
    if point.step_index >= settings.max_steps:
        raise CriticalPointNotFoundError(
            f"No stability point within {settings.max_steps} steps."
        )


def _walk_to_switch(
    settings: ContinuationSettings, walker: Iterator[PathPoint]
) -> Tuple[PathPoint, PathPoint]:
    """
    Consumes walker until the switch criterion fires and returns the point
    before and the point where it fired. The walker can be resumed.
    """
    start = next(walker)
    if start.negative_pivots > 0 or start.min_pivot <= 0.0:
        raise CriticalPointNotFoundError("The unloaded truss is not stable.")
    previous = start
    for point in walker:
        ratio = point.min_pivot / start.min_pivot
        if point.negative_pivots > 0 or ratio < settings.switch_ratio:
            logger.info(
                "switching to the extended system at lambda = %.6e (pivot ratio %.3f)",
                point.lam,
                ratio,
            )
            return previous, point
        _check_limits(point, settings)
        previous = point
    # Sanity check, walk_path never stops by itself.
    assert False


def bracket_first_instability(
    model: TrussModel,
    a: np.ndarray,
    settings: ContinuationSettings,
    x_start: Optional[np.ndarray] = None,
) -> Tuple[PathPoint, PathPoint, PathPoint]:
    """
    Follows the path to the switch point of trace_until_near_critical, then
    on until the first negative pivot appears.

    Arguments
    =========
     - model: The truss.
     - a: The group areas.
     - settings: The continuation settings.
     - x_start: The unloaded free positions, the reference geometry if None.

    Returns
    =======
    The switch point, then the last stable point and the first unstable one.
    The first stability point of the path lies between the last two.

    Exceptions
    ==========
    A CriticalPointNotFoundError is raised if the truss is unstable when
    unloaded, or if max_steps or lambda_max are reached first.
    """
    walker = walk_path(model, a, settings, x_start)
    before, near = _walk_to_switch(settings, walker)
    if near.negative_pivots > 0:
        return near, before, near
    before = near
    for point in walker:
        if point.negative_pivots > 0:
            return near, before, point
        _check_limits(point, settings)
        before = point
    # Sanity check, walk_path never stops by itself.
    assert False


def in_bracket(
    model: TrussModel,
    settings: ContinuationSettings,
    before: PathPoint,
    after: PathPoint,
    x: np.ndarray,
    lam: float,
    margin: float = 2.0,
) -> bool:
    """
    True if the state (x, lam) belongs to the path segment between before and
    after: its load is not below the stable end and its distance to it, in
    the arc metric, stays within margin times the length of the segment.
    """
    weight = _arc_weight(model, settings)
    span = _arc_norm(np.append(after.x - before.x, after.lam - before.lam), weight)
    offset = _arc_norm(np.append(x - before.x, lam - before.lam), weight)
    floor = before.lam - 1e-9 * max(abs(before.lam), 1.0)
    return lam >= floor and offset <= margin * span


def bracket_limit_point(points: List[PathPoint]) -> Tuple[PathPoint, PathPoint]:
    """
    Returns the first pair of consecutive points between which a negative
    pivot appears, the bracket of the first stability point.

    Exceptions
    ==========
    A CriticalPointNotFoundError is raised if the path never crosses one.
    """
    for before, after in zip(points, points[1:]):
        if after.negative_pivots > before.negative_pivots:
            return before, after
    raise CriticalPointNotFoundError("The traced path crosses no stability point.")


def refine_limit_point(
    model: TrussModel,
    a: np.ndarray,
    before: PathPoint,
    after: PathPoint,
    settings: ContinuationSettings,
    rtol: float = 1e-10,
) -> PathPoint:
    """
    Refines a bracket from bracket_limit_point by bisection until its arc
    length shrank by rtol, and returns the last stable point. Its load
    parameter converges to the critical one.
    """
    weight = _arc_weight(model, settings)
    initial = _arc_norm(np.append(after.x - before.x, after.lam - before.lam), weight)
    length = initial
    while length > rtol * initial:
        before, after = halve_bracket(model, a, before, after, settings)
        length = _arc_norm(
            np.append(after.x - before.x, after.lam - before.lam), weight
        )
    return before


def halve_bracket(
    model: TrussModel,
    a: np.ndarray,
    before: PathPoint,
    after: PathPoint,
    settings: ContinuationSettings,
) -> Tuple[PathPoint, PathPoint]:
    """
    Bisection step on a bracket of consecutive path points whose negative
    pivot counts differ: the path point at half the chord from before
    replaces the end with the same count.
    """
    chord = np.append(after.x - before.x, after.lam - before.lam)
    half = 0.5 * _arc_norm(chord, _arc_weight(model, settings))
    middle = _arc_attempt(model, a, before, chord, half, settings)
    if middle.negative_pivots > before.negative_pivots:
        return before, middle
    return middle, after


def path_table(model: TrussModel, points: List[PathPoint]) -> Writer:
    """
    Returns a Writer holding the path dump: step, lambda, log_abs_det,
    negative_pivots, then the full nodal coordinates.
    """
    header = ["step", "lambda", "log_abs_det", "negative_pivots"]
    header += [f"{axis}{node}" for node in range(model.n_p) for axis in "xyz"]
    table = Writer(header)
    for point in points:
        table.log(
            [point.step_index, point.lam, point.log_abs_det, point.negative_pivots]
            + model.expand(point.x).tolist()
        )
    return table


##################################### MAIN #####################################

if __name__ == "__main__":
    # The code to run when this file is used as a script goes here
    pass

##################################### EOF ######################################
