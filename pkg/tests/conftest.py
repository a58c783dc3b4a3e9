import csv
import importlib.util
from pathlib import Path

import pytest
from hypothesis import settings

from drs.dmc_core import binary_adder, binary_xor, from_function

ROOT = Path(__file__).resolve().parents[1]
GOLDEN_CSV = ROOT / "tests" / "golden" / "derived_values.csv"
CHANNELS = ROOT / "channels"

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")


def load_golden():
    with open(GOLDEN_CSV) as fh:
        return {(r["case_id"], r["quantity"]): float(r["value"]) for r in csv.DictReader(fh)}


def load_script(name):
    spec = importlib.util.spec_from_file_location(name, ROOT / "scripts" / f"{name}.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


@pytest.fixture(scope="session")
def golden():
    return load_golden()


@pytest.fixture(scope="session")
def adder2():
    return binary_adder(2, "bit")


@pytest.fixture(scope="session")
def adder3():
    return binary_adder(3, "bit")


@pytest.fixture(scope="session")
def xor2():
    return binary_xor(2, "bit")


@pytest.fixture(scope="session")
def copy_first():
    """``Y = X_1``; the second input is ignored."""
    return from_function((2, 2), 2, lambda a, b: a, log_base="bit")
