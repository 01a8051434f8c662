#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
from typing import Callable, Dict, List, Mapping  # Used for type hints
from typing import Optional, Sequence, Tuple  # Used for type hints
import inspect  # Used to name unknown generator parameters
import math  # Used for the ring angles


# External imports
import numpy as np  # Used for the node coordinates


# Internal imports
from trussbuckle.errors import ConfigurationError
from trussbuckle.model import Group, TrussModel

################################### CLASSES ####################################

# Your classes go here

################################## FUNCTIONS ###################################


def _groups(count: int, area: float, bounds: Tuple[float, float]) -> List[Group]:
    """
    Returns count identical groups.
    """
    return [Group(a_init=area, a_min=bounds[0], a_max=bounds[1]) for _ in range(count)]


def von_mises(
    half_span: float = 1.0,
    rise: float = 0.2,
    E: float = 1000.0,
    area: float = 1.0,
    a_min: float = 0.5,
    a_max: float = 1.5,
    load: float = 1.0,
    groups: int = 1,
) -> TrussModel:
    """
    Two struts meeting at a loaded apex. The apex only moves vertically, so
    the truss has a single free dof and snaps through at a limit point.

    Arguments
    =========
     - half_span: Half the distance between the supports.
     - rise: Height of the apex above the supports.
     - E: Young's modulus.
     - area: Area of the struts.
     - a_min: Lower area bound.
     - a_max: Upper area bound.
     - load: Downward apex load of the load pattern.
     - groups: 1 for a shared area, 2 for one area per strut.
    """
    if half_span <= 0.0 or rise <= 0.0:
        raise ConfigurationError("half_span and rise must be positive.")
    if groups not in (1, 2):
        raise ConfigurationError("A von Mises truss has 1 or 2 groups.")
    return TrussModel(
        nodes=[[-half_span, 0.0, 0.0], [half_span, 0.0, 0.0], [0.0, 0.0, rise]],
        elements=[(0, 2, 0), (1, 2, int(groups) - 1)],
        supports=[(node, dof) for node in (0, 1) for dof in range(3)]
        + [(2, 0), (2, 1)],
        load=[(2, 2, -load)],
        youngs_modulus=E,
        groups=_groups(int(groups), area, (a_min, a_max)),
    )


def _cap_heights(radii: Sequence[float], apex: float) -> List[float]:
    """
    Heights of rings on the spherical cap through the apex (radius 0) and
    the outermost ring (height 0).
    """
    outer = radii[-1]
    sphere = (outer ** 2 + apex ** 2) / (2.0 * apex)
    return [math.sqrt(sphere ** 2 - r ** 2) - (sphere - apex) for r in radii]


def star_dome(
    rings: int = 2,
    nodes_per_ring: Optional[int] = None,
    ring_spacing: float = 5.0,
    apex: Optional[float] = None,
    E: float = 1e8,
    area: float = 0.5,
    a_min: float = 0.25,
    a_max: float = 0.75,
    load: float = 1.0,
) -> TrussModel:
    """
    A star dome: an apex node over concentric rings whose nodes are shifted
    by half a step from one ring to the next. Spokes join the apex to the
    first ring, hoops close every ring but the outermost one, and each ring
    node is braced to the two nearest nodes of the next ring. The outermost
    ring is pinned and the apex carries the load.

    The two-ring dome has rings at heights (2, 0) under an apex at 3 and 3
    groups (spokes, hoops, braces). Larger domes sit on a spherical cap and
    get one group per hoop ring and per brace layer.

    Arguments
    =========
     - rings: The number of rings, at least 2.
     - nodes_per_ring: 6 for two rings, 12 otherwise, when None.
     - ring_spacing: Radial distance between successive rings.
     - apex: Apex height, 3 for two rings and 6 otherwise when None.
     - E: Young's modulus.
     - area: Area of all the struts.
     - a_min: Lower area bound.
     - a_max: Upper area bound.
     - load: Downward apex load of the load pattern.
    """
    if rings < 2:
        raise ConfigurationError("A star dome needs at least 2 rings.")
    count = nodes_per_ring if nodes_per_ring is not None else (6 if rings == 2 else 12)
    if count < 3 or ring_spacing <= 0.0:
        raise ConfigurationError("A ring needs 3 nodes and a positive spacing.")
    top = apex if apex is not None else (3.0 if rings == 2 else 6.0)
    radii = [ring_spacing * (k + 1) for k in range(rings)]
    heights = [2.0 * top / 3.0, 0.0] if rings == 2 else _cap_heights(radii, top)

    nodes = [[0.0, 0.0, top]]
    for k, (radius, height) in enumerate(zip(radii, heights), start=1):
        for i in range(count):
            angle = 2.0 * math.pi * i / count + k * math.pi / count
            nodes.append([radius * math.cos(angle), radius * math.sin(angle), height])

    def node(k: int, i: int) -> int:
        return 1 + (k - 1) * count + i % count

    two_rings = rings == 2
    elements = [(0, node(1, i), 0) for i in range(count)]
    for k in range(1, rings):
        hoop = 1 if two_rings else k
        elements += [(node(k, i), node(k, i + 1), hoop) for i in range(count)]
    for k in range(1, rings):
        brace = 2 if two_rings else rings - 1 + k
        for i in range(count):
            elements.append((node(k, i), node(k + 1, i - 1), brace))
            elements.append((node(k, i), node(k + 1, i), brace))
    n_groups = 3 if two_rings else 2 * rings - 1
    return TrussModel(
        nodes=nodes,
        elements=elements,
        supports=[(node(rings, i), dof) for i in range(count) for dof in range(3)],
        load=[(0, 2, -load)],
        youngs_modulus=E,
        groups=_groups(n_groups, area, (a_min, a_max)),
    )


def truss_column(
    blocks: int = 10,
    base: float = 1.0,
    depth_ratio: float = 1.0,
    block_height: float = 1.0,
    E: float = 1e4,
    area: float = 0.1,
    a_min: float = 0.05,
    a_max: float = 0.15,
    load: float = 1.0,
) -> TrussModel:
    """
    A braced column of triangular section topped by a tetrahedral cap. The
    base is pinned and the tip only moves vertically.

    Each block holds 3 vertical struts, the 3 horizontal struts of its top
    triangle and an X-brace on each face. The blocks fall in three bands
    (lower 40 %, middle 30 %, upper 30 %), each with vertical, horizontal
    and brace groups, and the cap struts form the last group.

    Arguments
    =========
     - blocks: The number of blocks, at least 3.
     - base: Base edge of the triangular section.
     - depth_ratio: Depth of the section over its base edge. The default
        keeps the sway modes of the two directions apart.
     - block_height: Height of a block, and of the cap.
     - E: Young's modulus.
     - area: Area of all the struts.
     - a_min: Lower area bound.
     - a_max: Upper area bound.
     - load: Downward tip load of the load pattern.
    """
    if blocks < 3:
        raise ConfigurationError("A truss column needs at least 3 blocks.")
    if min(base, depth_ratio, block_height) <= 0.0:
        raise ConfigurationError("Column dimensions must be positive.")
    section = np.array([[0.0, 0.0], [base, 0.0], [base / 2.0, depth_ratio * base]])
    nodes = [
        [x, y, level * block_height] for level in range(blocks + 1) for x, y in section
    ]
    centroid = section.mean(axis=0)
    tip = len(nodes)
    nodes.append([centroid[0], centroid[1], (blocks + 1) * block_height])

    lower, middle = round(0.4 * blocks), round(0.7 * blocks)
    elements = list()
    for block in range(blocks):
        band = 0 if block < lower else (1 if block < middle else 2)
        bottom, top = 3 * block, 3 * (block + 1)
        for i in range(3):
            j = (i + 1) % 3
            elements.append((bottom + i, top + i, 3 * band))
            elements.append((top + i, top + j, 3 * band + 1))
            elements.append((bottom + i, top + j, 3 * band + 2))
            elements.append((bottom + j, top + i, 3 * band + 2))
    elements += [(3 * blocks + i, tip, 9) for i in range(3)]
    return TrussModel(
        nodes=nodes,
        elements=elements,
        supports=[(i, dof) for i in range(3) for dof in range(3)]
        + [(tip, 0), (tip, 1)],
        load=[(tip, 2, -load)],
        youngs_modulus=E,
        groups=_groups(10, area, (a_min, a_max)),
    )


# The generators by kind.
GENERATORS: Dict[str, Callable[..., TrussModel]] = {
    "von_mises": von_mises,
    "star_dome": star_dome,
    "truss_column": truss_column,
}


def generate(kind: str, params: Optional[Mapping[str, float]] = None) -> TrussModel:
    """
    Builds the example truss of the given kind.

    Arguments
    =========
     - kind: One of the GENERATORS keys.
     - params: Keyword parameters of the generator.

    Exceptions
    ==========
    A ConfigurationError is raised for an unknown kind or parameter.
    """
    if kind not in GENERATORS:
        raise ConfigurationError(
            f"Unknown generator {kind!r}, expected one of {', '.join(GENERATORS)}."
        )
    generator = GENERATORS[kind]
    params = dict(params or {})
    accepted = inspect.signature(generator).parameters
    for key in params:
        if key not in accepted:
            raise ConfigurationError(f"Unknown parameter {key!r} for {kind}.")
    # Integer parameters arrive as floats from the command line.
    for key, value in params.items():
        if accepted[key].annotation in (int, Optional[int]):
            if float(value) != int(value):
                raise ConfigurationError(f"Parameter {key!r} must be an integer.")
            params[key] = int(value)
    return generator(**params)


def default_sigma(kind: str, params: Optional[Mapping[str, float]] = None) -> float:
    """
    Returns the usual standard deviation of the mode amplitudes of an
    example, relative to unit norm modes.
    """
    if kind == "von_mises":
        return 0.01
    if kind == "star_dome":
        rings = int((params or {}).get("rings", 2))
        return 0.1 if rings == 2 else 0.03
    if kind == "truss_column":
        return 0.006
    raise ConfigurationError(f"Unknown generator {kind!r}.")


##################################### MAIN #####################################

if __name__ == "__main__":
    # The code to run when this file is used as a script goes here
    pass

##################################### EOF ######################################
