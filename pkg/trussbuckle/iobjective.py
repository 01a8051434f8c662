#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
from typing import Optional  # Used for type hints
from dataclasses import dataclass  # Used for the evaluation record
import math  # Used for the NaN defaults


# External imports
import numpy as np  # Used for type hints


# Internal imports
# Your imports within this package go here

################################### CLASSES ####################################


@dataclass(frozen=True)
class Evaluation:
    """
    One evaluation of an objective.
    """

    # The point in unit box coordinates.
    z: np.ndarray
    # The design the point stands for (full areas for trusses).
    design: Optional[np.ndarray]
    # The objective value, maximised.
    g: float
    # Moments of the critical load, NaN when not computed.
    mean: float = math.nan
    std: float = math.nan
    # False when the design violates its bounds, g is then a penalty.
    feasible: bool = True
    # True when the computation failed, g is then a penalty.
    failed: bool = False


class IObjective:
    """
    Interface of the functions maximised by the Bayesian optimiser, to avoid
    tying the optimiser to the truss problem.

    Points are given in the unit box [0, 1]^dimension.
    """

    @property
    def dimension(self) -> int:
        """
        Abstract definition of the IObjective.dimension property.
        """
        raise NotImplementedError("IObjective.dimension has not been reimplemented.")

    def evaluate(self, z: np.ndarray) -> Evaluation:
        """
        Abstract definition of the IObjective.evaluate method.

        Arguments
        =========
         - z: The point, in unit box coordinates.

        Returns
        =======
        The Evaluation of the point.
        """
        raise NotImplementedError("IObjective.evaluate has not been reimplemented.")

    def initial_point(self) -> Optional[np.ndarray]:
        """
        Returns a point that must be part of the initial design, if any.
        """
        return None

    def is_degenerate(self) -> bool:
        """
        True if the feasible set is a single point, evaluated once.
        """
        return self.dimension == 0


################################## FUNCTIONS ###################################

# Your functions go here

##################################### MAIN #####################################

if __name__ == "__main__":
    # The code to run when this file is used as a script goes here
    pass

##################################### EOF ######################################
