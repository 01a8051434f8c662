#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
from typing import Any, Dict, List, Sequence, Tuple  # Used for type hints
import json  # Used to parse the model files
import math  # Used to refuse overflowing numbers


# External imports
# Your imports from other packages go here


# Internal imports
from trussbuckle.errors import ModelFormatError
from trussbuckle.model import Group, TrussModel
from trussbuckle.writer import format_json, write_json

################################### CLASSES ####################################

# Top level keys, in canonical order. Only nu may be omitted.
KEYS = ("nodes", "elements", "supports", "load", "E", "nu", "groups")
GROUP_KEYS = ("a_init", "a_min", "a_max")

################################## FUNCTIONS ###################################


def _unique_keys(pairs: List[Tuple[str, Any]]) -> Dict[str, Any]:
    """
    object_pairs_hook refusing duplicated keys.
    """
    document = dict()
    for key, value in pairs:
        if key in document:
            raise ModelFormatError(f"Duplicated key {key!r}.", key=key)
        document[key] = value
    return document


def _no_constant(name: str):
    """
    parse_constant hook refusing NaN and Infinity, which are not JSON.
    """
    raise ModelFormatError(f"Non finite number {name} is not valid JSON.")


def _number(value: Any, where: str) -> float:
    """
    Returns value as a float, refusing booleans and non numbers.
    """
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ModelFormatError(f"{where} must be a number, got {value!r}.")
    try:
        number = float(value)
    except OverflowError:
        number = math.inf
    if not math.isfinite(number):
        raise ModelFormatError(f"{where} must be finite, got {value!r}.")
    return number


def _index(value: Any, where: str) -> int:
    """
    Returns value as an int, refusing anything but integers.
    """
    if isinstance(value, bool) or not isinstance(value, int):
        raise ModelFormatError(f"{where} must be an integer, got {value!r}.")
    return value


def _rows(document: Dict[str, Any], key: str, width: int) -> List[Sequence[Any]]:
    """
    Returns the list of fixed width rows stored under key.
    """
    rows = document[key]
    if not isinstance(rows, list):
        raise ModelFormatError(f"{key!r} must be an array.", key=key)
    for position, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != width:
            raise ModelFormatError(
                f"{key}[{position}] must be an array of {width} entries.", key=key
            )
    return rows


def parse_model(text: str) -> TrussModel:
    """
    Parses a truss model document.

    Arguments
    =========
     - text: The JSON document.

    Exceptions
    ==========
    A ModelFormatError is raised on malformed JSON (with its line and column),
    on unknown, missing or duplicated keys (naming the key) and on values of
    the wrong type, NaN, Infinity and overflowing literals included. A
    ModelError is raised if the data violates the model invariants.
    """
    try:
        document = json.loads(
            text, object_pairs_hook=_unique_keys, parse_constant=_no_constant
        )
    except json.JSONDecodeError as error:
        raise ModelFormatError(
            error.msg, line=error.lineno, column=error.colno
        ) from error
    if not isinstance(document, dict):
        raise ModelFormatError("The model must be a JSON object.")
    for key in document:
        if key not in KEYS:
            raise ModelFormatError(f"Unknown key {key!r}.", key=key)
    for key in KEYS:
        if key not in document and key != "nu":
            raise ModelFormatError(f"Missing key {key!r}.", key=key)

    nodes = [
        [_number(value, f"nodes[{n}]") for value in row]
        for n, row in enumerate(_rows(document, "nodes", 3))
    ]
    elements = [
        tuple(_index(value, f"elements[{e}]") for value in row)
        for e, row in enumerate(_rows(document, "elements", 3))
    ]
    supports = [
        tuple(_index(value, f"supports[{s}]") for value in row)
        for s, row in enumerate(_rows(document, "supports", 2))
    ]
    load = [
        (
            _index(row[0], f"load[{entry}]"),
            _index(row[1], f"load[{entry}]"),
            _number(row[2], f"load[{entry}]"),
        )
        for entry, row in enumerate(_rows(document, "load", 3))
    ]
    groups = document["groups"]
    if not isinstance(groups, list):
        raise ModelFormatError("'groups' must be an array.", key="groups")
    parsed_groups = list()
    for g, group in enumerate(groups):
        if not isinstance(group, dict):
            raise ModelFormatError(f"groups[{g}] must be an object.", key="groups")
        for key in group:
            if key not in GROUP_KEYS:
                raise ModelFormatError(f"Unknown key {key!r} in groups[{g}].", key=key)
        for key in GROUP_KEYS:
            if key not in group:
                raise ModelFormatError(f"Missing key {key!r} in groups[{g}].", key=key)
        parsed_groups.append(
            Group(
                **{
                    key: _number(group[key], f"groups[{g}].{key}")
                    for key in GROUP_KEYS
                }
            )
        )
    return TrussModel(
        nodes=nodes,
        elements=elements,
        supports=supports,
        load=load,
        youngs_modulus=_number(document["E"], "E"),
        groups=parsed_groups,
        poisson_ratio=_number(document.get("nu", 0.0), "nu"),
    )


def load_model(path: str) -> TrussModel:
    """
    Reads and parses the truss model file at path.
    """
    with open(path, "r", encoding="utf-8") as model_file:
        return parse_model(model_file.read())


def model_document(model: TrussModel) -> Dict[str, Any]:
    """
    Returns the model as a dict with the keys in canonical order.
    """
    return {
        "nodes": model.X0.reshape(-1, 3).tolist(),
        "elements": [
            [int(a), int(b), int(g)]
            for (a, b), g in zip(model.element_nodes, model.element_groups)
        ],
        "supports": [list(support) for support in model.supports],
        "load": [list(entry) for entry in model.load],
        "E": model.E,
        "nu": model.nu,
        "groups": [
            {"a_init": group.a_init, "a_min": group.a_min, "a_max": group.a_max}
            for group in model.groups
        ],
    }


def dump_model(model: TrussModel) -> str:
    """
    Returns the canonical JSON document of the model: keys in canonical
    order, floats on 17 significant digits. Parsing and dumping it again
    gives the same bytes.
    """
    return format_json(model_document(model)) + "\n"


def save_model(model: TrussModel, path: str):
    """
    Writes the canonical document of the model to path, STDOUT included.
    """
    write_json(model_document(model), path)


##################################### MAIN #####################################

if __name__ == "__main__":
    # The code to run when this file is used as a script goes here
    pass

##################################### EOF ######################################
