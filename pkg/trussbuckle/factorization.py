#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
from typing import Tuple  # Used for type hints


# External imports
import numpy as np  # Used for the pivot bookkeeping
from scipy import linalg  # Used for the Bunch-Kaufman factorisation


# Internal imports
from trussbuckle.errors import ModelError, SingularMatrixError

################################### CLASSES ####################################

# Pivots below this fraction of the largest matrix entry count as zero.
ZERO_PIVOT = 1e-14


class FactorizationReport:
    """
    Symmetric indefinite factorisation P^T L D L^T P of a matrix, with its
    inertia and the logarithm of the absolute determinant.

    The determinant itself is never formed: it over- or underflows as soon as
    the matrix has a few dozen rows. Sign changes of det(K) show up as changes
    of the negative pivot count instead.
    """

    def __init__(self, matrix: np.ndarray, zero_tolerance: float = ZERO_PIVOT):
        """
        Constructor of the FactorizationReport class, factorises the matrix.

        Arguments
        =========
         - matrix: The symmetric matrix to factorise.
         - zero_tolerance: Relative magnitude under which a pivot is zero.

        Exceptions
        ==========
        A ModelError is raised if the matrix is not square.
        """
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ModelError(f"Cannot factorise a matrix of shape {matrix.shape}.")
        self.size = matrix.shape[0]
        self.scale = float(np.max(np.abs(matrix))) if self.size else 0.0
        # The lower triangle is used, as for a symmetric matrix.
        self.lu, self.d, self.perm = linalg.ldl(matrix, lower=True)
        # Permuting the rows of lu gives a unit lower triangular matrix.
        self.triangular = self.lu[self.perm]
        self.pivots = _block_pivots(self.d)
        threshold = zero_tolerance * max(self.scale, np.finfo(float).tiny)
        self.positive = int(np.sum(self.pivots > threshold))
        self.negative = int(np.sum(self.pivots < -threshold))
        self.zero = self.size - self.positive - self.negative
        # Sanity check, every pivot is counted exactly once.
        assert self.positive + self.negative + self.zero == self.size
        with np.errstate(divide="ignore"):
            self.log_abs_det = float(np.sum(np.log(np.abs(self.pivots))))

    @property
    def inertia(self) -> Tuple[int, int, int]:
        """
        The (positive, negative, zero) pivot counts.
        """
        return (self.positive, self.negative, self.zero)

    @property
    def min_abs_pivot(self) -> float:
        """
        The smallest pivot magnitude, the quantity monitored during
        path-following.
        """
        return float(np.min(np.abs(self.pivots))) if self.size else 0.0

    @property
    def is_singular(self) -> bool:
        """
        True if the factorisation has at least one zero pivot.
        """
        return self.zero > 0

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """
        Solves the factorised system for one or several right-hand sides.

        Arguments
        =========
         - rhs: A vector, or a matrix with one right-hand side per column.

        Exceptions
        ==========
        A SingularMatrixError is raised if the factorisation has zero pivots.
        """
        if self.is_singular:
            raise SingularMatrixError(
                f"Refusing to solve with {self.zero} zero pivot(s)."
            )
        rhs = np.asarray(rhs, dtype=float)
        forward = linalg.solve_triangular(
            self.triangular, rhs[self.perm], lower=True, unit_diagonal=True
        )
        middle = linalg.solve(self.d, forward, assume_a="sym")
        backward = linalg.solve_triangular(
            self.triangular.T, middle, lower=False, unit_diagonal=True
        )
        solution = np.empty_like(backward)
        solution[self.perm] = backward
        return solution


################################## FUNCTIONS ###################################


def _block_pivots(d: np.ndarray) -> np.ndarray:
    """
    Returns the pivots of the block diagonal factor d. The two eigenvalues of
    a 2x2 block stand for its two pivots: they carry its inertia and the
    product of their magnitudes is the magnitude of its determinant.
    """
    size = d.shape[0]
    pivots = np.empty(size)
    index = 0
    while index < size:
        if index + 1 < size and d[index + 1, index] != 0.0:
            pivots[index : index + 2] = np.linalg.eigvalsh(
                d[index : index + 2, index : index + 2]
            )
            index += 2
        else:
            pivots[index] = d[index, index]
            index += 1
    return pivots


def factorize_symmetric(
    K: np.ndarray, zero_tolerance: float = ZERO_PIVOT
) -> FactorizationReport:
    """
    Factorises the symmetric matrix K and reports its inertia.

    Arguments
    =========
     - K: The symmetric matrix.
     - zero_tolerance: Relative magnitude under which a pivot is zero.

    Returns
    =======
    The FactorizationReport, which also solves systems with K.
    """
    return FactorizationReport(K, zero_tolerance=zero_tolerance)


##################################### MAIN #####################################

if __name__ == "__main__":
    # The code to run when this file is used as a script goes here
    pass

##################################### EOF ######################################
