#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
from setuptools import setup  # Used to describe the python package.


# External imports
# Your imports from other packages go here


# Internal imports
# Your imports within this package go here

################################### CLASSES ####################################

# Your classes go here

################################## FUNCTIONS ###################################


def main():
    """
    Calls the setup function and defines the python package.
    """
    # Calling the setup function with the right arguments.
    setup(
        name="trussbuckle",
        version="0.1.0",
        author="trussbuckle developers",
        packages=["trussbuckle"],  # Non-recursive list of source directories.
        license="GPL3",
        python_requires=">=3.8",
        install_requires=["numpy>=1.20", "scipy>=1.7"],
        entry_points={"console_scripts": ["trussbuckle = trussbuckle.cli:main"]},
    )


##################################### MAIN #####################################

if __name__ == "__main__":
    # Calling the package creation function.
    main()

##################################### EOF ######################################
