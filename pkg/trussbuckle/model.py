#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
from typing import Tuple, Sequence, NamedTuple  # Used for type hints
from dataclasses import dataclass  # Used for the small records


# External imports
import numpy as np  # Used for all the array algebra


# Internal imports
from trussbuckle.errors import ModelError, SingularGeometryError

################################### CLASSES ####################################

# Relative length below which an element is considered collapsed.
DEGENERATE_LENGTH = 1e-10


@dataclass(frozen=True)
class Group:
    """
    A group of struts sharing one cross-sectional area (one design variable).
    """

    # Area of the initial design.
    a_init: float
    # Lower bound of the area in optimisation.
    a_min: float
    # Upper bound of the area in optimisation.
    a_max: float
    # Sum of the reference lengths of the struts in the group.
    length: float = 0.0


@dataclass(frozen=True)
class ElementState:
    """
    Kinematics and axial force of one strut in the current configuration.
    """

    # Reference length.
    L: float
    # Current length.
    l: float
    # Unit direction from node_a to node_b, current configuration.
    n: np.ndarray
    # Axial force, positive in tension.
    T: float
    # Logarithmic strain.
    strain: float


class ElementArrays(NamedTuple):
    """
    Vectorised kinematics of all the struts, one entry per element.
    """

    L: np.ndarray
    l: np.ndarray
    n: np.ndarray
    T: np.ndarray
    V: np.ndarray


class TrussModel:
    """
    A pin-jointed truss: reference geometry, connectivity, supports, load
    pattern, material and design-variable groups.

    The model is immutable once built. Positions handed to the mechanics
    functions are always the n_d free degrees of freedom, in the order of
    TrussModel.free_dofs; the supported ones stay at their reference value.
    """

    def __init__(
        self,
        nodes: Sequence[Sequence[float]],
        elements: Sequence[Tuple[int, int, int]],
        supports: Sequence[Tuple[int, int]],
        load: Sequence[Tuple[int, int, float]],
        youngs_modulus: float,
        groups: Sequence[Group],
        poisson_ratio: float = 0.0,
    ):
        """
        Constructor of the TrussModel class.

        Arguments
        =========
         - nodes: The reference coordinates [x, y, z] of each node.
         - elements: The struts as (node_a, node_b, group) triples.
         - supports: The fixed degrees of freedom as (node, dof) pairs.
         - load: The load pattern as (node, dof, value) triples.
         - youngs_modulus: The Young's modulus E.
         - groups: The area groups. Their length field is recomputed here.
         - poisson_ratio: Inert metadata, kept for the model file.

        Exceptions
        ==========
        A ModelError is raised if the data violates one of the invariants of
        the model.
        """
        # Storing the reference geometry as a flat read-only array.
        coordinates = np.asarray(nodes, dtype=float)
        if coordinates.ndim != 2 or coordinates.shape[1] != 3:
            raise ModelError("nodes must be a list of [x, y, z] triples.")
        if not np.all(np.isfinite(coordinates)):
            raise ModelError("Node coordinates must be finite.")
        self.n_p = coordinates.shape[0]
        self.X0 = _frozen(coordinates.reshape(-1))

        # Connectivity.
        if len(elements) == 0:
            raise ModelError("The truss has no elements.")
        connectivity = np.asarray(elements, dtype=int)
        if connectivity.ndim != 2 or connectivity.shape[1] != 3:
            raise ModelError("elements must be (node_a, node_b, group) triples.")
        self.n_e = connectivity.shape[0]
        self.element_nodes = _frozen(connectivity[:, :2].copy())
        self.element_groups = _frozen(connectivity[:, 2].copy())
        for index, (node_a, node_b) in enumerate(self.element_nodes):
            if not (0 <= node_a < self.n_p and 0 <= node_b < self.n_p):
                raise ModelError(f"Element {index} references a missing node.")
            if node_a == node_b:
                raise ModelError(f"Element {index} connects node {node_a} to itself.")

        # Groups, every one of them must be used by at least one element.
        self.n_g = len(groups)
        if self.n_g == 0:
            raise ModelError("The truss has no area groups.")
        if self.element_groups.min() < 0 or self.element_groups.max() >= self.n_g:
            raise ModelError("An element references a missing group.")
        used = np.bincount(self.element_groups, minlength=self.n_g)
        if np.any(used == 0):
            unused = int(np.flatnonzero(used == 0)[0])
            raise ModelError(f"Group {unused} is not referenced by any element.")

        # Supports are eliminated from the system of equations.
        fixed = np.zeros(3 * self.n_p, dtype=bool)
        for node, dof in supports:
            if not (0 <= node < self.n_p) or dof not in (0, 1, 2):
                raise ModelError(f"Invalid support ({node}, {dof}).")
            fixed[3 * node + dof] = True
        self.fixed = _frozen(fixed)
        self.supports = tuple((int(node), int(dof)) for node, dof in supports)
        self.free_dofs = _frozen(np.flatnonzero(~fixed))
        self.n_d = self.free_dofs.size
        if self.n_d == 0 or self.n_d >= 3 * self.n_p:
            raise ModelError("The truss must be supported and keep free dofs.")

        # The load pattern lives on the free dofs only.
        position = np.full(3 * self.n_p, -1, dtype=int)
        position[self.free_dofs] = np.arange(self.n_d)
        pattern = np.zeros(self.n_d)
        for node, dof, value in load:
            if not (0 <= node < self.n_p) or dof not in (0, 1, 2):
                raise ModelError(f"Invalid load entry ({node}, {dof}).")
            if fixed[3 * node + dof]:
                raise ModelError(f"Load applied on supported dof ({node}, {dof}).")
            if not np.isfinite(value):
                raise ModelError(f"Load entry ({node}, {dof}) must be finite.")
            pattern[position[3 * node + dof]] += float(value)
        self.load = tuple((int(n), int(d), float(v)) for n, d, v in load)
        self.f = _frozen(pattern)

        # Material.
        if not np.isfinite(youngs_modulus) or youngs_modulus <= 0.0:
            raise ModelError("The Young's modulus must be positive and finite.")
        if not np.isfinite(poisson_ratio):
            raise ModelError("The Poisson ratio must be finite.")
        self.E = float(youngs_modulus)
        self.nu = float(poisson_ratio)

        # Reference lengths and group lengths.
        self.L = _frozen(self._lengths(self.X0))
        lengths = np.bincount(self.element_groups, weights=self.L, minlength=self.n_g)
        self.groups = tuple(
            Group(
                a_init=float(group.a_init),
                a_min=float(group.a_min),
                a_max=float(group.a_max),
                length=float(length),
            )
            for group, length in zip(groups, lengths)
        )
        for index, group in enumerate(self.groups):
            if not np.all(np.isfinite([group.a_init, group.a_min, group.a_max])):
                raise ModelError(f"Group {index} areas must be finite.")
            if not (0.0 < group.a_min <= group.a_init <= group.a_max):
                raise ModelError(
                    f"Group {index} must satisfy 0 < a_min <= a_init <= a_max."
                )

    def _lengths(self, X: np.ndarray) -> np.ndarray:
        """
        Returns the element lengths for the full coordinate vector X.

        Exceptions
        ==========
        A ModelError is raised if an element has zero reference length.
        """
        coordinates = X.reshape(-1, 3)
        delta = (
            coordinates[self.element_nodes[:, 1]]
            - coordinates[self.element_nodes[:, 0]]
        )
        lengths = np.linalg.norm(delta, axis=1)
        if np.any(lengths <= 0.0):
            index = int(np.flatnonzero(lengths <= 0.0)[0])
            raise ModelError(f"Element {index} has zero reference length.")
        return lengths

    @property
    def group_lengths(self) -> np.ndarray:
        """
        The total member length of every group, the vector l of V(a) = a.l.
        """
        return np.array([group.length for group in self.groups])

    @property
    def a_init(self) -> np.ndarray:
        """
        The areas of the initial design.
        """
        return np.array([group.a_init for group in self.groups])

    @property
    def a_min(self) -> np.ndarray:
        """
        The lower area bounds.
        """
        return np.array([group.a_min for group in self.groups])

    @property
    def a_max(self) -> np.ndarray:
        """
        The upper area bounds.
        """
        return np.array([group.a_max for group in self.groups])

    @property
    def characteristic_length(self) -> float:
        """
        Diagonal of the bounding box of the reference geometry.
        """
        coordinates = self.X0.reshape(-1, 3)
        return float(np.linalg.norm(coordinates.max(axis=0) - coordinates.min(axis=0)))

    def reference_positions(self) -> np.ndarray:
        """
        Returns the free dofs of the reference geometry, the undeformed state.
        """
        return self.X0[self.free_dofs].copy()

    def expand(self, x: np.ndarray) -> np.ndarray:
        """
        Returns the full 3.n_p coordinates for the free positions x.
        """
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_d,):
            raise ModelError(f"Expected {self.n_d} free positions, got {x.shape}.")
        X = np.array(self.X0)
        X[self.free_dofs] = x
        return X

    def restrict(self, X: np.ndarray) -> np.ndarray:
        """
        Returns the free dofs of a full length vector.
        """
        X = np.asarray(X, dtype=float)
        if X.shape[0] != 3 * self.n_p:
            raise ModelError(f"Expected {3 * self.n_p} entries, got {X.shape[0]}.")
        return X[self.free_dofs]

    def element_areas(self, a: np.ndarray) -> np.ndarray:
        """
        Returns the area of every element for the group areas a.
        """
        a = np.asarray(a, dtype=float)
        if a.shape != (self.n_g,):
            raise ModelError(f"Expected {self.n_g} group areas, got {a.shape}.")
        if np.any(a <= 0.0):
            raise ModelError("Cross-sectional areas must be positive.")
        return a[self.element_groups]

    def with_coordinates(self, X: np.ndarray) -> "TrussModel":
        """
        Returns the same truss with the reference geometry X, used to build
        the imperfect structures.

        Arguments
        =========
         - X: The full 3.n_p reference coordinates.
        """
        X = np.asarray(X, dtype=float)
        if X.shape != (3 * self.n_p,):
            raise ModelError(f"Expected {3 * self.n_p} coordinates, got {X.shape}.")
        return TrussModel(
            nodes=X.reshape(-1, 3),
            elements=[
                (int(a), int(b), int(g))
                for (a, b), g in zip(self.element_nodes, self.element_groups)
            ],
            supports=self.supports,
            load=self.load,
            youngs_modulus=self.E,
            groups=self.groups,
            poisson_ratio=self.nu,
        )


################################## FUNCTIONS ###################################


def _frozen(array: np.ndarray) -> np.ndarray:
    """
    Marks an array read-only and returns it.
    """
    array.setflags(write=False)
    return array


def element_arrays(model: TrussModel, x: np.ndarray, a: np.ndarray) -> ElementArrays:
    """
    Computes the kinematics of every strut at the free positions x.

    Arguments
    =========
     - model: The truss.
     - x: The current free positions.
     - a: The group areas.

    Returns
    =======
    The ElementArrays of the struts, with T = (V.E/l).ln(l/L) and V = a.L.

    Exceptions
    ==========
    A SingularGeometryError is raised if an element is shorter than
    DEGENERATE_LENGTH times its reference length.
    """
    areas = model.element_areas(a)
    coordinates = model.expand(x).reshape(-1, 3)
    delta = (
        coordinates[model.element_nodes[:, 1]] - coordinates[model.element_nodes[:, 0]]
    )
    current = np.linalg.norm(delta, axis=1)
    collapsed = current <= DEGENERATE_LENGTH * model.L
    if np.any(collapsed):
        index = int(np.flatnonzero(collapsed)[0])
        raise SingularGeometryError(f"Element {index} collapsed to zero length.")
    direction = delta / current[:, None]
    V = areas * model.L
    T = V * model.E / current * np.log(current / model.L)
    return ElementArrays(L=model.L, l=current, n=direction, T=T, V=V)


def element_kinematics(
    model: TrussModel, x: np.ndarray, e: int, a_e: float
) -> ElementState:
    """
    Returns the state of the element e for the area a_e.

    Arguments
    =========
     - model: The truss.
     - x: The current free positions.
     - e: The index of the element.
     - a_e: The cross-sectional area of the element.
    """
    if a_e <= 0.0:
        raise ModelError("Cross-sectional areas must be positive.")
    if not 0 <= e < model.n_e:
        raise ModelError(f"Element {e} does not exist.")
    coordinates = model.expand(x).reshape(-1, 3)
    node_a, node_b = model.element_nodes[e]
    delta = coordinates[node_b] - coordinates[node_a]
    L = float(model.L[e])
    l = float(np.linalg.norm(delta))
    if l <= DEGENERATE_LENGTH * L:
        raise SingularGeometryError(f"Element {e} collapsed to zero length.")
    strain = float(np.log(l / L))
    T = a_e * L * model.E / l * strain
    return ElementState(L=L, l=l, n=delta / l, T=T, strain=strain)


def _element_dofs(model: TrussModel) -> Tuple[np.ndarray, np.ndarray]:
    """
    Returns the full dof indices (n_e x 3) of node_a and node_b of every
    element.
    """
    offsets = np.arange(3)
    dofs_a = 3 * model.element_nodes[:, 0:1] + offsets
    dofs_b = 3 * model.element_nodes[:, 1:2] + offsets
    return dofs_a, dofs_b


def assemble_vector(
    model: TrussModel, element_vectors: np.ndarray
) -> np.ndarray:
    """
    Assembles one 3-vector per element, acting with + on node_b and - on
    node_a, and restricts the result to the free dofs.
    """
    dofs_a, dofs_b = _element_dofs(model)
    full = np.zeros(3 * model.n_p)
    np.add.at(full, dofs_b, element_vectors)
    np.add.at(full, dofs_a, -element_vectors)
    return full[model.free_dofs]


def assemble_matrix(model: TrussModel, element_blocks: np.ndarray) -> np.ndarray:
    """
    Assembles the element matrices [[k, -k], [-k, k]] from the 3x3 blocks k
    (n_e x 3 x 3) and restricts the result to the free dofs.
    """
    dofs_a, dofs_b = _element_dofs(model)
    full = np.zeros((3 * model.n_p, 3 * model.n_p))
    for rows, cols, sign in (
        (dofs_a, dofs_a, 1.0),
        (dofs_b, dofs_b, 1.0),
        (dofs_a, dofs_b, -1.0),
        (dofs_b, dofs_a, -1.0),
    ):
        np.add.at(
            full,
            (rows[:, :, None], cols[:, None, :]),
            sign * element_blocks,
        )
    return full[np.ix_(model.free_dofs, model.free_dofs)]


def internal_force(model: TrussModel, x: np.ndarray, a: np.ndarray) -> np.ndarray:
    """
    Returns the internal nodal force vector t(x) on the free dofs.
    """
    state = element_arrays(model, x, a)
    return assemble_vector(model, state.T[:, None] * state.n)


def tangent_stiffness(model: TrussModel, x: np.ndarray, a: np.ndarray) -> np.ndarray:
    """
    Returns the tangent stiffness K(x) on the free dofs, assembled from
    k = (V.E/l^2 - 2T/l) n(x)n + (T/l) I.
    """
    state = element_arrays(model, x, a)
    axial = state.V * model.E / state.l ** 2 - 2.0 * state.T / state.l
    blocks = axial[:, None, None] * np.einsum("ei,ej->eij", state.n, state.n)
    blocks = blocks + (state.T / state.l)[:, None, None] * np.eye(3)
    return assemble_matrix(model, blocks)


def residual(
    model: TrussModel, x: np.ndarray, lam: float, a: np.ndarray
) -> np.ndarray:
    """
    Returns the out-of-balance force r = t(x) - lambda.f.
    """
    return internal_force(model, x, a) - lam * model.f


def strain_energy(model: TrussModel, x: np.ndarray, a: np.ndarray) -> float:
    """
    Returns the total strain energy, sum of E.V.eps^2/2 over the struts.
    """
    state = element_arrays(model, x, a)
    strain = np.log(state.l / state.L)
    return float(np.sum(model.E * state.V * strain ** 2) / 2.0)


def apply_imperfection(
    X0: np.ndarray, Phi: np.ndarray, beta: np.ndarray
) -> np.ndarray:
    """
    Returns the imperfect geometry X = X0 + sum_i beta_i phi_i.

    Arguments
    =========
     - X0: The full as-designed coordinates.
     - Phi: The modes, one full-length column per mode.
     - beta: The amplitude of every mode.
    """
    X0 = np.asarray(X0, dtype=float)
    Phi = np.asarray(Phi, dtype=float)
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    if Phi.ndim == 1:
        Phi = Phi[:, None]
    if Phi.shape[0] != X0.shape[0] or Phi.shape[1] != beta.shape[0]:
        raise ModelError(
            f"Cannot combine {Phi.shape} modes with {beta.shape[0]} amplitudes "
            f"on {X0.shape[0]} coordinates."
        )
    return X0 + Phi @ beta


def volume(a: np.ndarray, model: TrussModel) -> float:
    """
    Returns the material volume V(a) = a.l of the group areas a.
    """
    a = np.asarray(a, dtype=float)
    if a.shape != (model.n_g,):
        raise ModelError(f"Expected {model.n_g} group areas, got {a.shape}.")
    return float(a @ model.group_lengths)


def orient(vector: np.ndarray) -> np.ndarray:
    """
    Returns the vector with its sign fixed so that its entry of largest
    magnitude (the first one on ties) is positive.
    """
    vector = np.asarray(vector, dtype=float)
    if vector[int(np.argmax(np.abs(vector)))] < 0.0:
        return -vector
    return vector


##################################### MAIN #####################################

if __name__ == "__main__":
    # The code to run when this file is used as a script goes here
    pass

##################################### EOF ######################################
