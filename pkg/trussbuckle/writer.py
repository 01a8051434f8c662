#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
from typing import Any, List, Sequence, TextIO  # Used for type hints
import json  # Used to quote strings in the JSON output
import math  # Used to spot non finite floats
import sys  # Used for stdout and stderr


# External imports
import numpy as np  # Used to recognise numpy scalars and arrays


# Internal imports
# Your imports within this package go here

################################### CLASSES ####################################


class Writer:
    """
    Buffers the rows of a table (path dump, samples, optimisation history,
    Pareto front) and writes them as CSV once the computation is over.
    """

    def __init__(self, header: Sequence[str]):
        """
        Constructor of the Writer class.

        Arguments
        =========
         - header: The column names of the table.
        """
        self.header = list(header)
        # The buffer where the rows will be logged.
        self.buffer: List[List[Any]] = list()

    def log(self, row: Sequence[Any]):
        """
        Logs a row to later write it to the target file.

        Arguments
        =========
         - row: The values of the row, one per column.
        """
        # Sanity check, the table is rectangular.
        assert len(row) == len(self.header)
        self.buffer.append(list(row))

    def write(self, path: str):
        """
        Saves the content of the Writer to the provided path.

        NOTE
        ====
        If path is STDOUT or STDERR, the appropriate file descriptors will be
        used.
        """
        with _open_target(path) as target_file:
            write_format(target_file, self.header)
            for row in self.buffer:
                write_format(target_file, row)


class _Target:
    """
    Context manager yielding either a standard stream or an opened file.
    """

    def __init__(self, path: str):
        self.path = path
        self.handle = None

    def __enter__(self) -> TextIO:
        if self.path == "STDOUT":
            return sys.stdout
        if self.path == "STDERR":
            return sys.stderr
        self.handle = open(self.path, "w", encoding="utf-8", newline="")
        return self.handle

    def __exit__(self, *exc_info):
        if self.handle is not None:
            self.handle.close()
        return False


################################## FUNCTIONS ###################################


def _open_target(path: str) -> _Target:
    """
    Returns a context manager for the path, STDOUT and STDERR included.
    """
    return _Target(path)


def format_value(value: Any) -> str:
    """
    Formats one CSV cell. Floats use the shortest representation that reads
    back to the same value.
    """
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if value is None:
        return ""
    return str(value)


def write_format(target_file: TextIO, row: Sequence[Any]):
    """
    Write one row to the provided destination with the right formatting.

    Arguments
    =========
     - target_file: The file descriptor where the output line should be
        written.
     - row: The values of the row.
    """
    target_file.write(",".join(format_value(value) for value in row) + "\n")


def format_json(document: Any, indent: int = 0) -> str:
    """
    Serialises a document as JSON with floats printed on 17 significant
    digits, keys in insertion order and short lists of scalars kept on one
    line, so that equal documents always give identical bytes.

    Arguments
    =========
     - document: Nested dicts, lists, numbers, strings, booleans and None.
     - indent: The current indentation level, used by the recursion.
    """
    padding = "  " * (indent + 1)
    closing = "  " * indent
    if isinstance(document, dict):
        if not document:
            return "{}"
        items = [
            f"{padding}{json.dumps(str(key))}: {format_json(value, indent + 1)}"
            for key, value in document.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + closing + "}"
    if isinstance(document, np.ndarray):
        document = document.tolist()
    if isinstance(document, (list, tuple)):
        if not document:
            return "[]"
        nested = (dict, list, tuple, np.ndarray)
        if not any(isinstance(item, nested) for item in document):
            return "[" + ", ".join(format_json(item) for item in document) + "]"
        items = [padding + format_json(item, indent + 1) for item in document]
        return "[\n" + ",\n".join(items) + "\n" + closing + "]"
    if document is None:
        return "null"
    if isinstance(document, (bool, np.bool_)):
        return "true" if document else "false"
    if isinstance(document, (int, np.integer)):
        return str(int(document))
    if isinstance(document, (float, np.floating)):
        value = float(document)
        if not math.isfinite(value):
            return "null"
        return format(value, ".17g")
    return json.dumps(str(document))


def write_json(document: Any, path: str):
    """
    Writes a document as JSON to the provided path, STDOUT and STDERR
    included.
    """
    with _open_target(path) as target_file:
        target_file.write(format_json(document) + "\n")


##################################### MAIN #####################################

if __name__ == "__main__":
    # The code to run when this file is used as a script goes here
    pass

##################################### EOF ######################################
