from pathlib import Path

import pytest

from csltl.constraints import FlatSystem, load_table
from csltl.parsing import parse_formula

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


@pytest.fixture
def flat():
    return FlatSystem()


@pytest.fixture
def four():
    return load_table(FIXTURES / "four.table")


@pytest.fixture
def fx():
    return FIXTURES


@pytest.fixture
def parse(flat):
    def go(text, cs=None):
        return parse_formula(text, cs or flat)

    return go


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, f"rep_{rep.when}", rep)
