#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
import sys  # Used for the exit code


# External imports
# Your imports from other packages go here


# Internal imports
from trussbuckle.cli import main

##################################### MAIN #####################################

if __name__ == "__main__":
    sys.exit(main())

##################################### EOF ######################################
