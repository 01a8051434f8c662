#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
from typing import Optional  # Used for type hints


# External imports
# Your imports from other packages go here


# Internal imports
# Your imports within this package go here

################################### CLASSES ####################################


class BuckleError(Exception):
    """
    Root of all the errors raised on purpose by the trussbuckle package.
    """


class ModelError(BuckleError, ValueError):
    """
    The truss model (or an array handed to one of its operations) is invalid.
    """


class ModelFormatError(ModelError):
    """
    A truss model file could not be parsed or does not follow the schema.
    """

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        key: Optional[str] = None,
    ):
        """
        Constructor of the ModelFormatError class.

        Arguments
        =========
         - message: The human readable diagnostic.
         - line: The line of the offending character, for syntax errors.
         - column: The column of the offending character, for syntax errors.
         - key: The offending key, for schema errors.
        """
        # Prefixing the position so that the diagnostic is self contained.
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super(ModelFormatError, self).__init__(message)
        # Storing the arguments
        self.line = line
        self.column = column
        self.key = key


class ConfigurationError(BuckleError, ValueError):
    """
    A run configuration or an optimisation problem cannot be executed.
    """


class SingularGeometryError(BuckleError):
    """
    An element collapsed to (nearly) zero length.
    """


class SolverError(BuckleError, RuntimeError):
    """
    A numerical procedure failed. The phase attribute names the procedure so
    that the command line can report where the failure happened.
    """

    # Default phase of the subclasses, overridden where relevant.
    PHASE = "solver"

    def __init__(self, message: str, phase: Optional[str] = None):
        """
        Constructor of the SolverError class.

        Arguments
        =========
         - message: The human readable diagnostic.
         - phase: The name of the failing phase, defaults to the class PHASE.
        """
        super(SolverError, self).__init__(message)
        self.phase = phase if phase is not None else self.PHASE

    def __str__(self) -> str:
        """
        String representation, prefixed by the failing phase.
        """
        return f"[{self.phase}] {super(SolverError, self).__str__()}"


class ConvergenceError(SolverError):
    """
    A Newton iteration did not reach its tolerance.
    """

    PHASE = "equilibrium"


class SingularMatrixError(SolverError):
    """
    A solve was requested on a factorisation with zero pivots.
    """

    PHASE = "factorization"


class StepTooSmallError(SolverError):
    """
    Arc-length step halving was exhausted.
    """

    PHASE = "continuation"


class CriticalPointNotFoundError(SolverError):
    """
    Path-following never came close to a stability point.
    """

    PHASE = "trace"


class BucklingModeError(SolverError):
    """
    The linearised buckling analysis could not deliver the requested modes.
    """

    PHASE = "eigen-buckling"


class SamplingError(SolverError):
    """
    Too many imperfection samples failed to converge.
    """

    PHASE = "sampling"


class IllConditionedKernelError(SolverError):
    """
    The Gaussian process kernel matrix could not be factorised.
    """

    PHASE = "surrogate"


################################## FUNCTIONS ###################################

# Your functions go here

##################################### MAIN #####################################

if __name__ == "__main__":
    # The code to run when this file is used as a script goes here
    pass

##################################### EOF ######################################
