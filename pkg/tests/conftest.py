import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from helpers import DATA, EXAMPLE_SOC  # noqa: E402

from splitchip.model import load_constraints, load_system  # noqa: E402
from splitchip.netlist import CELL_TYPES  # noqa: E402
from splitchip.technology import technology_from_doc  # noqa: E402


@pytest.fixture(scope="session")
def example_spec():
    return load_system(EXAMPLE_SOC.read_text())


@pytest.fixture(scope="session")
def example_constraints(example_spec):
    return load_constraints(EXAMPLE_SOC.read_text(), example_spec)


@pytest.fixture(scope="session")
def flat_tech():
    """Uniform 10ps/1um^2 library: easy hand arithmetic."""
    cells = {
        c: {"delay": 10e-12, "area": 1.0, "leakage": 1e-6, "switch_energy": 1e-15}
        for c in CELL_TYPES
    }
    return technology_from_doc(
        {"name": "flat", "cells": cells, "seq_overhead": 5e-12, "activity_factor": 0.1}
    )


@pytest.fixture(scope="session")
def advanced_tech():
    return technology_from_doc(json.loads((DATA / "tech" / "advanced.json").read_text()))


@pytest.fixture(scope="session")
def legacy_tech():
    return technology_from_doc(json.loads((DATA / "tech" / "legacy.json").read_text()))
