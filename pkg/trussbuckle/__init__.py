#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
# Your imports from the standard library go here


# External imports
# Your imports from other packages go here


# Internal imports
#
# Using this file as a proxy.
from trussbuckle.errors import (
    BuckleError,
    ConfigurationError,
    ModelError,
    SingularGeometryError,
    SolverError,
)
from trussbuckle.model import Group, TrussModel
from trussbuckle.modelfile import load_model, save_model
from trussbuckle.generators import generate
from trussbuckle.continuation import ContinuationSettings, trace_path
from trussbuckle.stability import SolverSettings, critical_load, linear_buckling_modes
from trussbuckle.sampling import ImperfectionDistribution, buckling_statistics
from trussbuckle.optimizer import bayes_optimize, make_problem, pareto_sweep

################################### CLASSES ####################################

# Your classes go here

################################## FUNCTIONS ###################################

# Your functions go here

##################################### MAIN #####################################

if __name__ == "__main__":
    # The code to run when this file is used as a script goes here
    pass

##################################### EOF ######################################
