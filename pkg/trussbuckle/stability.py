#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
from typing import Callable, List, Optional, Sequence  # Used for type hints
from dataclasses import dataclass, field, replace  # Used for the records
import logging  # Used for diagnostics
import math  # Used for finiteness checks


# External imports
import numpy as np  # Used for the vector algebra
from scipy import linalg  # Used for the generalized eigenproblem


# Internal imports
from trussbuckle.continuation import (
    ContinuationSettings,
    PathPoint,
    bracket_first_instability,
    halve_bracket,
    in_bracket,
    newton_equilibrium,
    residual_floor,
    softest_mode,
)
from trussbuckle.errors import (
    BucklingModeError,
    ConfigurationError,
    ConvergenceError,
    CriticalPointNotFoundError,
    SingularGeometryError,
    SingularMatrixError,
    SolverError,
)
from trussbuckle.factorization import factorize_symmetric
from trussbuckle.model import (
    TrussModel,
    assemble_vector,
    element_arrays,
    orient,
    residual,
    tangent_stiffness,
)

################################### CLASSES ####################################

logger = logging.getLogger(__name__)

LIMIT = "limit"
BIFURCATION = "bifurcation"

ANALYTIC = "analytic"
FINITE_DIFFERENCE = "finite-difference"

# Norm below which an updated null vector counts as cancelled out.
PHI_FLOOR = 1e-12
# Bisection steps on the path bracket between two extended system runs.
BRACKET_HALVINGS = 4


@dataclass(frozen=True)
class ExtendedSettings:
    """
    Settings of the Newton iterations on the extended system.
    """

    # Equilibrium tolerance, relative to ||f||.max(|lambda|, 1) and never
    # below the rounding floor of the residual.
    tol_r: float = 1e-9
    # Null vector tolerance, relative to the largest strut stiffness a.E/L.
    tol_k: float = 1e-9
    # Tolerance on | ||phi|| - 1 |.
    tol_s: float = 1e-9
    max_iterations: int = 30
    # How the directional derivative of K.phi is computed.
    derivative: str = ANALYTIC
    # Finite-difference step relative to the size of the truss.
    fd_step: float = 1e-6
    # Pivots of K below this fraction of the strut stiffness make an iterate
    # singular while its equilibrium residual, relative to
    # ||f||.max(|lambda|, 1), is above singular_residual.
    singular_pivot: float = 1e-8
    singular_residual: float = 1e-4
    # Move of the positions along phi away from a singular iterate, relative
    # to the size of the truss.
    singular_shift: float = 1e-5
    # Moves of the positions, and restarts of phi, allowed per solve.
    max_shifts: int = 3
    # Threshold on |phi.f| / ||f|| separating limit from bifurcation points.
    limit_threshold: float = 1e-6
    # Bisection rounds on the path bracket when a cold start lands outside it.
    bracket_refinements: int = 8

    def __post_init__(self):
        if min(self.tol_r, self.tol_k, self.tol_s, self.fd_step) <= 0.0:
            raise ConfigurationError("Extended system tolerances must be positive.")
        if min(self.singular_pivot, self.singular_residual, self.singular_shift) <= 0.0:
            raise ConfigurationError("Singularity thresholds must be positive.")
        if self.derivative not in (ANALYTIC, FINITE_DIFFERENCE):
            raise ConfigurationError(f"Unknown derivative kind {self.derivative!r}.")
        if self.max_iterations < 1:
            raise ConfigurationError("max_iterations must be positive.")
        if self.max_shifts < 0 or self.bracket_refinements < 0:
            raise ConfigurationError("Retry counts cannot be negative.")


@dataclass(frozen=True)
class SolverSettings:
    """
    Everything a critical load computation needs, passed through the sampling
    and the optimisation layers.
    """

    continuation: ContinuationSettings = field(default_factory=ContinuationSettings)
    extended: ExtendedSettings = field(default_factory=ExtendedSettings)


@dataclass(frozen=True)
class StabilityPoint:
    """
    A converged root of the extended system: an equilibrium where K is
    singular with the unit null vector phi.
    """

    # Free positions.
    x: np.ndarray
    # Null vector of K, unit norm.
    phi: np.ndarray
    # Critical load parameter.
    lam: float
    iterations: int = 0
    # LIMIT or BIFURCATION, diagnostic only.
    kind: str = LIMIT
    # Largest scaled residual block of every iterate.
    residual_history: tuple = ()


@dataclass(frozen=True)
class ModeBasis:
    """
    Linearised buckling modes used as imperfection shapes.
    """

    # One full-length (3.n_p) unit column per mode, zero on supported dofs.
    Phi: np.ndarray
    # Linearised buckling load of every mode, ascending.
    lambdas: np.ndarray

    @property
    def n_b(self) -> int:
        """
        The number of modes.
        """
        return self.Phi.shape[1]

    def restricted(self, model: TrussModel) -> np.ndarray:
        """
        Returns the modes on the free dofs only, one column per mode.
        """
        return self.Phi[model.free_dofs, :]

    def select(self, numbers: Sequence[int]) -> "ModeBasis":
        """
        Returns the basis of the modes with the given 1-based numbers, in
        that order. (2,) keeps the secondary mode alone.

        Exceptions
        ==========
        A BucklingModeError is raised for an empty selection, a repeated
        number or a number outside 1..n_b.
        """
        columns = [int(number) - 1 for number in numbers]
        valid = all(0 <= column < self.n_b for column in columns)
        if not columns or not valid or len(set(columns)) != len(columns):
            raise BucklingModeError(
                f"Cannot select modes {tuple(numbers)} out of {self.n_b}."
            )
        return ModeBasis(Phi=self.Phi[:, columns], lambdas=self.lambdas[columns])


################################## FUNCTIONS ###################################


def _stiffness_bisection(
    K_E: np.ndarray, K_G: np.ndarray, rtol: float = 1e-10, max_doublings: int = 200
) -> float:
    """
    Returns the smallest lambda > 0 for which K_E + lambda.K_G loses positive
    definiteness, bracketed by doubling from 1 and refined by bisection on
    the negative pivot count.
    """

    def unstable(lam: float) -> bool:
        report = factorize_symmetric(K_E + lam * K_G)
        return report.negative > 0 or report.is_singular

    low, high = 0.0, 1.0
    for doubling in range(max_doublings):
        if unstable(high):
            break
        low, high = high, 2.0 * high
    else:
        raise BucklingModeError("No positive linearised buckling load was found.")
    while high - low > rtol * high:
        middle = 0.5 * (low + high)
        if unstable(middle):
            high = middle
        else:
            low = middle
    return high


def linear_buckling_modes(
    model: TrussModel,
    a: np.ndarray,
    n_b: int,
    settings: Optional[ContinuationSettings] = None,
) -> ModeBasis:
    """
    Solves the linearised buckling problem (K_E + lambda.K_G).phi = 0.

    K_E is the stiffness of the unloaded truss. K_G is the secant
    (K(x_ref) - K_E)/lambda_ref with x_ref the nonlinear equilibrium at
    lambda_ref, a tenth of a first estimate of the buckling load obtained by
    inertia bisection on a provisional K_G from the linear response.

    Arguments
    =========
     - model: The truss.
     - a: The group areas.
     - n_b: The number of modes wanted.
     - settings: The settings of the equilibrium solve at lambda_ref.

    Returns
    =======
    The ModeBasis of the n_b lowest positive buckling loads, each mode a unit
    full-length vector with its largest entry positive.

    Exceptions
    ==========
    A BucklingModeError is raised if the truss is unstable when unloaded or
    has fewer than n_b positive buckling loads. Failures of the equilibrium
    solve at lambda_ref propagate.
    """
    if settings is None:
        settings = ContinuationSettings()
    if not 1 <= n_b <= model.n_d:
        raise BucklingModeError(f"Cannot compute {n_b} modes on {model.n_d} free dofs.")
    x0 = model.reference_positions()
    K_E = tangent_stiffness(model, x0, a)
    report = factorize_symmetric(K_E)
    if report.negative > 0 or report.is_singular:
        raise BucklingModeError("The unloaded truss is not stable.")
    unit_response = report.solve(model.f)
    # Provisional geometric stiffness from a small step along the linear response.
    h = 1e-4 * model.characteristic_length / float(np.linalg.norm(unit_response))
    K_G0 = (tangent_stiffness(model, x0 + h * unit_response, a) - K_E) / h
    lam_ref = 0.1 * _stiffness_bisection(K_E, K_G0)
    logger.debug("linearised buckling: reference load %.6e", lam_ref)
    reference = newton_equilibrium(
        model, a, lam_ref, x0 + lam_ref * unit_response, settings
    )
    K_G = (tangent_stiffness(model, reference.x, a) - K_E) / lam_ref

    # -K_G.phi = mu.K_E.phi with mu = 1/lambda, K_E positive definite.
    mu, vectors = linalg.eigh(-K_G, K_E)
    positive = mu > 1e-12 * max(float(np.max(np.abs(mu))), np.finfo(float).tiny)
    if np.count_nonzero(positive) < n_b:
        raise BucklingModeError(
            f"Only {np.count_nonzero(positive)} positive buckling loads, "
            f"{n_b} requested."
        )
    order = np.argsort(1.0 / mu[positive])[:n_b]
    lambdas = (1.0 / mu[positive])[order]
    Phi = np.zeros((3 * model.n_p, n_b))
    for column, vector in enumerate(vectors[:, positive][:, order].T):
        full = np.zeros(3 * model.n_p)
        full[model.free_dofs] = vector
        Phi[:, column] = orient(full / np.linalg.norm(full))
    logger.info("linearised buckling loads: %s", np.array2string(lambdas))
    return ModeBasis(Phi=Phi, lambdas=lambdas)


def imperfection_modes(
    model: TrussModel,
    a: np.ndarray,
    n_b: int = 1,
    numbers: Optional[Sequence[int]] = None,
    settings: Optional[ContinuationSettings] = None,
) -> ModeBasis:
    """
    Returns the imperfection shapes: the n_b leading buckling modes, or the
    modes with the given 1-based numbers when numbers is set.
    """
    if numbers is None:
        return linear_buckling_modes(model, a, n_b, settings)
    if len(numbers) == 0:
        raise BucklingModeError("The mode selection is empty.")
    basis = linear_buckling_modes(model, a, max(int(n) for n in numbers), settings)
    return basis.select(numbers)


def _relative(model: TrussModel, vector: np.ndarray) -> np.ndarray:
    """
    Returns v_b - v_a for every element, the free vector being padded with
    zeros on the supported dofs.
    """
    full = np.zeros(3 * model.n_p)
    full[model.free_dofs] = vector
    nodal = full.reshape(-1, 3)
    return nodal[model.element_nodes[:, 1]] - nodal[model.element_nodes[:, 0]]


def directional_derivative_Kphi(
    model: TrussModel, x: np.ndarray, a: np.ndarray, phi: np.ndarray, du: np.ndarray
) -> np.ndarray:
    """
    Returns the derivative of K(x).phi along du, differentiated element by
    element from k = A n(x)n + B I with A = V.E/l^2 - 2T/l and B = T/l.

    The load pattern is fixed, so K.phi does not depend on lambda.

    Arguments
    =========
     - model: The truss.
     - x: The free positions.
     - a: The group areas.
     - phi: The vector K is applied to.
     - du: The direction of differentiation.
    """
    state = element_arrays(model, x, a)
    phi_rel = _relative(model, np.asarray(phi, dtype=float))
    delta = _relative(model, np.asarray(du, dtype=float))
    n, l, T = state.n, state.l, state.T
    VE = state.V * model.E
    A = VE / l ** 2 - 2.0 * T / l
    B = T / l
    dl = np.sum(n * delta, axis=1)
    dn = (delta - n * dl[:, None]) / l[:, None]
    dA = (-4.0 * VE / l ** 3 + 4.0 * T / l ** 2) * dl
    dB = (VE / l ** 3 - 2.0 * T / l ** 2) * dl
    n_phi = np.sum(n * phi_rel, axis=1)
    dn_phi = np.sum(dn * phi_rel, axis=1)
    element_vectors = (
        (dA * n_phi)[:, None] * n
        + A[:, None] * (dn * n_phi[:, None] + n * dn_phi[:, None])
        + dB[:, None] * phi_rel
    )
    return assemble_vector(model, element_vectors)


def directional_derivative_Kphi_fd(
    model: TrussModel,
    x: np.ndarray,
    a: np.ndarray,
    phi: np.ndarray,
    du: np.ndarray,
    step: float = 1e-6,
) -> np.ndarray:
    """
    Central finite-difference counterpart of directional_derivative_Kphi,
    with a step of step times the size of the truss along du.
    """
    du = np.asarray(du, dtype=float)
    norm = float(np.linalg.norm(du))
    if norm == 0.0:
        return np.zeros(model.n_d)
    h = step * model.characteristic_length / norm
    forward = tangent_stiffness(model, x + h * du, a) @ phi
    backward = tangent_stiffness(model, x - h * du, a) @ phi
    return (forward - backward) / (2.0 * h)


def stiffness_scale(model: TrussModel, a: np.ndarray) -> float:
    """
    Returns the largest axial stiffness a.E/L of the struts, the scale of K
    that does not vanish at stability points.
    """
    return float(np.max(model.element_areas(a) * model.E / model.L))


def classify(phi: np.ndarray, f: np.ndarray, threshold: float = 1e-6) -> str:
    """
    Returns LIMIT if the null vector has a component along the load pattern,
    BIFURCATION otherwise.
    """
    scale = float(np.linalg.norm(f)) * float(np.linalg.norm(phi))
    return LIMIT if abs(float(phi @ f)) > threshold * scale else BIFURCATION


def _derivative(
    model: TrussModel,
    x: np.ndarray,
    a: np.ndarray,
    phi: np.ndarray,
    settings: ExtendedSettings,
) -> Callable[[np.ndarray], np.ndarray]:
    """
    Returns du -> derivative of K.phi along du, as configured.
    """
    if settings.derivative == FINITE_DIFFERENCE:
        return lambda du: directional_derivative_Kphi_fd(
            model, x, a, phi, du, settings.fd_step
        )
    return lambda du: directional_derivative_Kphi(model, x, a, phi, du)


def extended_system_solve(
    model: TrussModel,
    a: np.ndarray,
    x0: np.ndarray,
    phi0: np.ndarray,
    lam0: float,
    settings: Optional[SolverSettings] = None,
) -> StabilityPoint:
    """
    Newton iterations on r(x, lambda) = 0, K(x).phi = 0, ||phi|| - 1 = 0.

    The linearised system is never formed. Every iteration factorises K once
    and solves it for f and r, then for the derivatives of K.phi along both
    solutions, from which the load correction follows by the norm equation.

    Arguments
    =========
     - model: The truss.
     - a: The group areas.
     - x0: The predictor of the positions.
     - phi0: The predictor of the null vector, non zero.
     - lam0: The predictor of the critical load.
     - settings: The solver settings.

    Returns
    =======
    The StabilityPoint, with phi scaled to unit norm and classified.

    Exceptions
    ==========
    A ConvergenceError is raised after max_iterations iterations or on a
    diverging iterate. A SingularMatrixError is raised if K stays singular
    after max_shifts moves of the positions along phi.
    """
    if settings is None:
        settings = SolverSettings()
    options = settings.extended
    x = np.array(x0, dtype=float)
    phi = np.array(phi0, dtype=float)
    lam = float(lam0)
    if not np.any(phi):
        raise ConfigurationError("The null vector predictor must be non zero.")
    phi_start = phi / float(np.linalg.norm(phi))
    f = model.f
    norm_f = float(np.linalg.norm(f))
    floor = residual_floor(model, a)
    stiffness = stiffness_scale(model, a)
    shifts = 0
    resets = 0
    history: List[float] = list()
    for iteration in range(options.max_iterations + 1):
        try:
            K = tangent_stiffness(model, x, a)
            r = residual(model, x, lam, a)
        except SingularGeometryError as error:
            raise ConvergenceError(str(error), phase="extended-system") from error
        K_phi = K @ phi
        norm_phi = float(np.linalg.norm(phi))
        s = norm_phi - 1.0
        tolerance_r = max(options.tol_r * norm_f * max(abs(lam), 1.0), floor)
        scaled = (
            float(np.linalg.norm(r)) / tolerance_r,
            float(np.linalg.norm(K_phi)) / stiffness / options.tol_k,
            abs(s) / options.tol_s,
        )
        history.append(max(scaled))
        logger.debug(
            "extended system %d: lambda = %.12e, scaled residuals %s",
            iteration,
            lam,
            ", ".join(f"{value:.3e}" for value in scaled),
        )
        if not all(math.isfinite(value) for value in scaled):
            raise ConvergenceError(
                "The extended system diverged.", phase="extended-system"
            )
        if history[-1] <= 1.0:
            phi = phi / norm_phi
            return StabilityPoint(
                x=x,
                phi=phi,
                lam=lam,
                iterations=iteration,
                kind=classify(phi, f, options.limit_threshold),
                residual_history=tuple(history),
            )
        if iteration == options.max_iterations:
            break
        report = factorize_symmetric(K)
        # Away from equilibrium the partitioned solve cancels out at a nearly
        # singular K. Close to the root the iterations converge through it.
        off = float(np.linalg.norm(r)) > options.singular_residual * norm_f * max(
            abs(lam), 1.0
        )
        singular = off and report.min_abs_pivot < options.singular_pivot * stiffness
        if report.is_singular or singular:
            if shifts == options.max_shifts:
                raise SingularMatrixError(
                    "K stays singular at the extended system iterates.",
                    phase="extended-system",
                )
            logger.info("singular K at lambda = %.12e, moving along phi.", lam)
            shift = options.singular_shift * model.characteristic_length
            x = x + shift * phi / norm_phi
            shifts += 1
            continue
        derivative = _derivative(model, x, a, phi, options)
        solved = report.solve(np.column_stack([f, r]))
        v_f, v_r = solved[:, 0], solved[:, 1]
        rhs = np.column_stack([derivative(v_f), K_phi - derivative(v_r)])
        solved = report.solve(rhs)
        dphi_1, dphi_2 = -solved[:, 0], -solved[:, 1]
        gradient = phi / norm_phi
        denominator = float(gradient @ dphi_1)
        if denominator == 0.0 or not math.isfinite(denominator):
            raise ConvergenceError(
                "The load correction is undetermined.", phase="extended-system"
            )
        dlam = -(float(gradient @ dphi_2) + s) / denominator
        x = x + v_f * dlam - v_r
        lam = lam + dlam
        updated = phi + dphi_1 * dlam + dphi_2
        norm_updated = float(np.linalg.norm(updated))
        if math.isfinite(norm_updated) and norm_updated > PHI_FLOOR:
            phi = updated
            continue
        # The update cancelled phi out, the iteration resumes from phi0.
        if resets == options.max_shifts:
            raise ConvergenceError(
                "The null vector vanished at the extended system iterates.",
                phase="extended-system",
            )
        logger.info("null vector lost at lambda = %.12e, restarting it.", lam)
        phi = phi_start.copy()
        resets += 1
    raise ConvergenceError(
        f"No stability point after {options.max_iterations} iterations "
        f"(last lambda = {lam:.6e}).",
        phase="extended-system",
    )


def is_first_instability(
    model: TrussModel, a: np.ndarray, point: StabilityPoint
) -> bool:
    """
    True if the stability point can end the stable branch of the path: its
    load is positive and K at the point has no negative eigenvalue once
    shifted by a millionth of the strut stiffness. A stability point reached
    past the first one has already lost a direction.
    """
    if point.lam <= 0.0:
        return False
    K = tangent_stiffness(model, point.x, a)
    shift = 1e-6 * stiffness_scale(model, a) * np.eye(model.n_d)
    return factorize_symmetric(K + shift).negative == 0


def _solve_in_bracket(
    model: TrussModel,
    a: np.ndarray,
    near: PathPoint,
    before: PathPoint,
    after: PathPoint,
    settings: SolverSettings,
) -> StabilityPoint:
    """
    Runs the extended system from the switch point near. While its root is
    not the stability point between before and after, the bracket is halved
    BRACKET_HALVINGS times and the extended system restarted from its stable
    end.
    """
    start = near
    for attempt in range(settings.extended.bracket_refinements + 1):
        phi0 = softest_mode(tangent_stiffness(model, start.x, a))
        try:
            point = extended_system_solve(
                model, a, start.x, phi0, start.lam, settings
            )
        except SolverError as error:
            logger.info(
                "extended system from lambda = %.6e failed (%s)", start.lam, error
            )
        else:
            inside = in_bracket(
                model, settings.continuation, before, after, point.x, point.lam
            )
            if inside and is_first_instability(model, a, point):
                return point
            logger.info(
                "extended system root %.6e outside the bracket [%.6e, %.6e]",
                point.lam,
                before.lam,
                after.lam,
            )
        if attempt == settings.extended.bracket_refinements:
            break
        for halving in range(BRACKET_HALVINGS):
            before, after = halve_bracket(
                model, a, before, after, settings.continuation
            )
        start = before
    raise CriticalPointNotFoundError(
        f"No stability point between lambda = {before.lam:.6e} and "
        f"{after.lam:.6e}."
    )


def critical_load(
    model: TrussModel,
    a: np.ndarray,
    settings: Optional[SolverSettings] = None,
    warm: Optional[StabilityPoint] = None,
) -> StabilityPoint:
    """
    Computes the first stability point of the truss.

    Without a predictor, the path is followed from the unloaded state until
    the stiffness nearly vanishes and on to the first negative pivot. The
    extended system takes over from the switch point, and from ever tighter
    brackets of the first stability point until its root lies inside.

    Arguments
    =========
     - model: The truss.
     - a: The group areas.
     - settings: The solver settings.
     - warm: A predictor from a nearby problem. A warm start that fails, or
        that lands on a stability point past the first one, is retried from
        scratch.

    Returns
    =======
    The StabilityPoint found.

    Exceptions
    ==========
    The SolverError of the cold start is raised when it fails.
    """
    if settings is None:
        settings = SolverSettings()
    if warm is not None:
        try:
            point = extended_system_solve(
                model, a, warm.x, warm.phi, warm.lam, settings
            )
        except SolverError as error:
            logger.warning("warm start failed (%s), starting from scratch.", error)
        else:
            if is_first_instability(model, a, point):
                return point
            logger.warning(
                "warm start reached lambda = %.6e past the first stability point, "
                "starting from scratch.",
                point.lam,
            )
    near, before, after = bracket_first_instability(model, a, settings.continuation)
    point = _solve_in_bracket(model, a, near, before, after, settings)
    logger.info(
        "critical load %.12e (%s) after %d extended iterations",
        point.lam,
        point.kind,
        point.iterations,
    )
    return point


def shifted_predictor(point: StabilityPoint, dx: np.ndarray) -> StabilityPoint:
    """
    Returns the point with its positions moved by dx, the predictor for a
    geometry moved by the same amount.
    """
    return replace(point, x=point.x + dx)


def is_solver_failure(error: Exception) -> bool:
    """
    True for the errors a critical load computation may recover from by a
    restart.
    """
    return isinstance(error, (SolverError, SingularGeometryError))


##################################### MAIN #####################################

if __name__ == "__main__":
    # The code to run when this file is used as a script goes here
    pass

##################################### EOF ######################################
