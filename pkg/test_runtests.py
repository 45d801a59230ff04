"""Pytest collection shim for the script-style checks in runtests/.

Each check module asserts at import time; importing it is the test.
The list and order come from runtests/__main__.py so the two stay in sync.
"""
import ast
import importlib
from pathlib import Path

import pytest

_MAIN = Path(__file__).parent / "runtests" / "__main__.py"


def _checks():
    for node in ast.parse(_MAIN.read_text()).body:
        if isinstance(node, ast.Assign) and any(
            isinstance(t, ast.Name) and t.id == "CHECKS" for t in node.targets
        ):
            return ast.literal_eval(node.value)
    raise RuntimeError("CHECKS not found in runtests/__main__.py")


@pytest.mark.parametrize("name", _checks())
def test_check(name):
    importlib.import_module("runtests." + name)
