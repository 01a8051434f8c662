#!/usr/bin/env python3

################################### METADATA ###################################

# Contributors: trussbuckle developers
# Contacts:
# Creation Date: 2026-10-17
# Language: Python3

################################### IMPORTS ####################################

# Standard library
import json  # Used to read the documents back
import math  # Used for the non finite values


# External imports
import numpy as np  # Used for the numpy scalars
import pytest  # Used for the error cases


# Internal imports
from trussbuckle.writer import Writer, format_json, format_value, write_json

################################### CLASSES ####################################

# Your classes go here

################################## FUNCTIONS ###################################


def test_format_value():
    """
    Cells are formatted so that they read back to the same value.
    """
    assert format_value(True) == "1"
    assert format_value(np.bool_(False)) == "0"
    assert format_value(3) == "3"
    assert format_value(np.int64(-2)) == "-2"
    assert format_value(0.1) == "0.1"
    assert float(format_value(1.0 / 3.0)) == 1.0 / 3.0
    assert format_value(np.float32(0.5)) == "0.5"
    assert format_value(math.nan) == "nan"
    assert format_value(None) == ""
    assert format_value("limit") == "limit"


def test_writer_to_file(tmp_path):
    """
    The header comes first, then one line per logged row.
    """
    table = Writer(["step", "lambda", "flagged"])
    table.log([0, 0.0, False])
    table.log([1, 0.25, True])
    path = tmp_path / "table.csv"
    table.write(str(path))
    assert path.read_text() == "step,lambda,flagged\n0,0.0,0\n1,0.25,1\n"


def test_writer_to_standard_streams(capsys):
    """
    STDOUT and STDERR are written to the process streams.
    """
    table = Writer(["a"])
    table.log([None])
    table.write("STDOUT")
    table.write("STDERR")
    captured = capsys.readouterr()
    assert captured.out == "a\n\n"
    assert captured.err == "a\n\n"


def test_writer_rows_are_rectangular():
    """
    A row of the wrong length is a programming error.
    """
    table = Writer(["a", "b"])
    with pytest.raises(AssertionError):
        table.log([1])


def test_format_json():
    """
    Nested documents keep their key order, short scalar lists stay on one
    line and non finite floats become null.
    """
    document = {
        "lambda_c": 1.0 / 3.0,
        "phi": np.array([1.0, 0.0]),
        "rows": [[1, 2], [3, 4]],
        "missing": math.nan,
        "flag": True,
        "kind": "limit",
        "empty": [],
    }
    text = format_json(document)
    assert text.splitlines()[0] == "{"
    assert '  "phi": [1, 0],' in text.splitlines()
    parsed = json.loads(text)
    assert list(parsed) == list(document)
    assert parsed["lambda_c"] == 1.0 / 3.0
    assert parsed["rows"] == [[1, 2], [3, 4]]
    assert parsed["missing"] is None
    assert parsed["flag"] is True
    assert parsed["empty"] == []
    assert format_json(math.inf) == "null"


def test_write_json(tmp_path, capsys):
    """
    JSON documents go to files or to STDOUT, newline terminated.
    """
    path = tmp_path / "result.json"
    write_json({"mean": 2.5}, str(path))
    assert path.read_text() == '{\n  "mean": 2.5\n}\n'
    write_json([1, 2], "STDOUT")
    assert capsys.readouterr().out == "[1, 2]\n"


##################################### MAIN #####################################

if __name__ == "__main__":
    # The code to run when this file is used as a script goes here
    pass

##################################### EOF ######################################
