#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
import math  # Used for the analytic von Mises path


# External imports
import numpy as np  # Used for the states
from numpy.testing import assert_allclose  # Used for the numerical checks
import pytest  # Used for the parametrised and error cases
from scipy.optimize import minimize_scalar  # Used for the analytic limit point


# Internal imports
from trussbuckle.continuation import (
    LOAD_CONTROL,
    ContinuationSettings,
    arc_length_step,
    bracket_first_instability,
    bracket_limit_point,
    equilibrium_tolerance,
    halve_bracket,
    in_bracket,
    newton_equilibrium,
    path_table,
    refine_limit_point,
    residual_floor,
    trace_path,
    trace_until_near_critical,
)
from trussbuckle.errors import (
    ConfigurationError,
    ConvergenceError,
    CriticalPointNotFoundError,
)
from trussbuckle.factorization import factorize_symmetric
from trussbuckle.generators import generate
from trussbuckle.model import residual, tangent_stiffness

################################### CLASSES ####################################

# Your classes go here

################################## FUNCTIONS ###################################


def von_mises_load(z: float, half_span=1.0, rise=0.2, E=1000.0, area=1.0) -> float:
    """
    Load parameter of the default von Mises truss with its apex at height z.
    """
    L = math.hypot(half_span, rise)
    l = math.hypot(half_span, z)
    T = area * L * E / l * math.log(l / L)
    return -2.0 * T * z / l


def von_mises_critical_load() -> float:
    """
    The analytic first limit load of the default von Mises truss.
    """
    result = minimize_scalar(
        lambda z: -von_mises_load(z),
        bounds=(0.0, 0.2),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return -result.fun


@pytest.mark.parametrize("kind", ["von_mises", "star_dome"])
def test_newton_linear_regime(kind):
    """
    Tiny loads give the linear response.
    """
    model = generate(kind)
    settings = ContinuationSettings()
    x0 = model.reference_positions()
    K0 = tangent_stiffness(model, x0, model.a_init)
    unit = np.linalg.solve(K0, model.f)
    lam = 1e-8 * model.characteristic_length / np.linalg.norm(unit)
    point = newton_equilibrium(model, model.a_init, lam, x0, settings)
    linear = lam * unit
    assert_allclose(point.x - x0, linear, rtol=1e-6, atol=1e-6 * np.max(np.abs(linear)))
    assert point.negative_pivots == 0
    assert point.lam == lam


def test_newton_unloaded_is_reference():
    """
    Without load the reference geometry is in equilibrium at once.
    """
    model = generate("truss_column")
    point = newton_equilibrium(
        model, model.a_init, 0.0, model.reference_positions(), ContinuationSettings()
    )
    assert point.iterations == 0
    assert_allclose(point.x, model.reference_positions())


def test_newton_gives_up():
    """
    A single iteration cannot reach a nonlinear equilibrium.
    """
    model = generate("von_mises")
    settings = ContinuationSettings(max_iterations=1)
    with pytest.raises(ConvergenceError) as caught:
        newton_equilibrium(
            model, model.a_init, 1.0, model.reference_positions(), settings
        )
    assert caught.value.phase == "equilibrium"


def test_trace_crosses_limit_point():
    """
    The traced von Mises path passes its limit point, where a negative pivot
    appears, and keeps equilibrium on the way.
    """
    model = generate("von_mises")
    settings = ContinuationSettings()
    points = trace_path(model, model.a_init, settings, max_steps=80)
    assert points[0].lam == 0.0
    assert [p.step_index for p in points] == list(range(len(points)))
    counts = [p.negative_pivots for p in points]
    assert 0 in counts and 1 in counts
    for point in points:
        r = residual(model, point.x, point.lam, model.a_init)
        assert np.linalg.norm(r) <= 1e-10 * max(abs(point.lam), 1.0)


def test_limit_point_refinement_matches_analytic_load():
    """
    Bisection on the bracket of the first negative pivot finds the analytic
    limit load.
    """
    model = generate("von_mises")
    settings = ContinuationSettings()
    points = trace_path(model, model.a_init, settings, max_steps=80)
    before, after = bracket_limit_point(points)
    assert after.negative_pivots == before.negative_pivots + 1
    refined = refine_limit_point(model, model.a_init, before, after, settings)
    assert refined.negative_pivots == 0
    assert refined.lam == pytest.approx(von_mises_critical_load(), rel=1e-6)


def test_bracket_without_crossing():
    """
    A path without negative pivots has no bracket.
    """
    model = generate("truss_column")
    points = trace_path(model, model.a_init, ContinuationSettings(), max_steps=3)
    with pytest.raises(CriticalPointNotFoundError):
        bracket_limit_point(points)


def test_lambda_max_stops_tracing():
    """
    Tracing stops at the first point beyond lambda_max.
    """
    model = generate("von_mises")
    settings = ContinuationSettings(lambda_max=1.0)
    points = trace_path(model, model.a_init, settings)
    assert points[-1].lam > 1.0
    assert all(point.lam <= 1.0 for point in points[:-1])


def test_load_control_tracing():
    """
    Load control climbs the stable branch with increasing loads.
    """
    model = generate("star_dome")
    settings = ContinuationSettings(kind=LOAD_CONTROL)
    points = trace_path(model, model.a_init, settings, max_steps=4)
    loads = [point.lam for point in points]
    assert loads == sorted(loads)
    assert len(points) == 5


def test_arc_length_step_respects_constraint():
    """
    An arc-length step lands on the sphere of radius ds around the start.
    """
    model = generate("von_mises")
    settings = ContinuationSettings()
    first = trace_path(model, model.a_init, settings, max_steps=1)[-1]
    ds = 0.05
    point = arc_length_step(model, model.a_init, first, settings, ds)
    # The default psi makes the load term unweighted.
    du = point.x - first.x
    length = math.sqrt(float(du @ du) + (point.lam - first.lam) ** 2)
    assert length == pytest.approx(ds, rel=1e-8)
    assert point.step_index == first.step_index + 1
    assert point.lam > first.lam


def test_switch_before_limit_point():
    """
    The switch criterion fires before the limit load, with a unit softest
    mode.
    """
    model = generate("von_mises")
    point, phi = trace_until_near_critical(model, model.a_init, ContinuationSettings())
    assert point.lam < von_mises_critical_load()
    assert np.linalg.norm(phi) == pytest.approx(1.0)
    unloaded = tangent_stiffness(model, model.reference_positions(), model.a_init)
    report = factorize_symmetric(tangent_stiffness(model, point.x, model.a_init))
    assert report.negative > 0 or report.min_abs_pivot < 0.2 * unloaded[0, 0]


def test_switch_not_reached():
    """
    Running out of steps before the stiffness drops is reported.
    """
    model = generate("truss_column")
    settings = ContinuationSettings(max_steps=2)
    with pytest.raises(CriticalPointNotFoundError):
        trace_until_near_critical(model, model.a_init, settings)


def test_equilibrium_tolerance_has_rounding_floor():
    """
    The tolerance never drops below the residual rounding leaves, so stiff
    trusses under tiny loads still converge.
    """
    model = generate("star_dome")
    settings = ContinuationSettings()
    a = model.a_init
    floor = residual_floor(model, a)
    assert floor > 0.0
    for lam in [0.0, 1.0, 1e6]:
        relative = equilibrium_tolerance(model, lam, settings)
        assert equilibrium_tolerance(model, lam, settings, a) == max(relative, floor)
    assert residual_floor(model, 10.0 * a) == pytest.approx(10.0 * floor)
    x0 = model.reference_positions()
    stiff = 1e3 * a
    unit = np.linalg.solve(tangent_stiffness(model, x0, stiff), model.f)
    lam = 1e-8 * model.characteristic_length / np.linalg.norm(unit)
    point = newton_equilibrium(model, stiff, lam, x0, settings)
    r = residual(model, point.x, lam, stiff)
    assert np.linalg.norm(r) <= equilibrium_tolerance(model, lam, settings, stiff)


def test_bracket_of_first_instability():
    """
    The walk stops at the first negative pivot, past a switch point below
    the limit load, and bisection keeps the limit point inside the bracket.
    """
    model = generate("von_mises")
    settings = ContinuationSettings()
    critical = von_mises_critical_load()
    near, before, after = bracket_first_instability(model, model.a_init, settings)
    assert near.lam < critical
    assert before.negative_pivots == 0 and after.negative_pivots == 1
    assert before.lam <= critical * (1.0 + 1e-9)
    assert before.step_index + 1 == after.step_index
    for halving in range(6):
        before, after = halve_bracket(model, model.a_init, before, after, settings)
        assert before.negative_pivots == 0 and after.negative_pivots == 1
        assert before.lam <= critical * (1.0 + 1e-9)
    # The critical apex height lies between the ends.
    z = minimize_scalar(
        lambda z: -von_mises_load(z),
        bounds=(0.0, 0.2),
        method="bounded",
        options={"xatol": 1e-12},
    ).x
    assert before.x[0] > z - 1e-9 and after.x[0] < z + 1e-9


def test_in_bracket():
    """
    Only states past the stable end, and close to the segment, belong to a
    bracket.
    """
    model = generate("von_mises")
    settings = ContinuationSettings()
    _, before, after = bracket_first_instability(model, model.a_init, settings)
    middle_x = 0.5 * (before.x + after.x)
    middle_lam = 0.5 * (before.lam + after.lam)
    assert in_bracket(model, settings, before, after, middle_x, middle_lam)
    assert in_bracket(model, settings, before, after, after.x, after.lam)
    assert not in_bracket(model, settings, before, after, before.x, before.lam - 1.0)
    assert not in_bracket(model, settings, before, after, -before.x, -before.lam)


def test_walk_stops_at_limits():
    """
    max_steps and lambda_max end the search for a bracket.
    """
    model = generate("truss_column")
    with pytest.raises(CriticalPointNotFoundError):
        bracket_first_instability(
            model, model.a_init, ContinuationSettings(max_steps=2)
        )
    with pytest.raises(CriticalPointNotFoundError):
        bracket_first_instability(
            generate("von_mises"),
            generate("von_mises").a_init,
            ContinuationSettings(lambda_max=0.5),
        )


def test_path_table(capsys):
    """
    The path dump holds one row per point with the full coordinates.
    """
    model = generate("von_mises")
    points = trace_path(model, model.a_init, ContinuationSettings(), max_steps=3)
    table = path_table(model, points)
    assert table.header[:4] == ["step", "lambda", "log_abs_det", "negative_pivots"]
    assert len(table.header) == 4 + 9
    assert len(table.buffer) == 4
    table.write("STDOUT")
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("step,lambda")
    assert lines[1].startswith("0,0.0,")


def test_invalid_settings():
    """
    Settings are validated when built.
    """
    with pytest.raises(ConfigurationError):
        ContinuationSettings(kind="displacement")
    with pytest.raises(ConfigurationError):
        ContinuationSettings(newton_tol=0.0)


##################################### MAIN #####################################

if __name__ == "__main__":
    # The code to run when this file is used as a script goes here
    pass

##################################### EOF ######################################
