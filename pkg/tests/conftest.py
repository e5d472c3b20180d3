import os
import random
from importlib import resources

import pytest

from toriczeta.algebra_io import build_problem, load_document
from toriczeta.laurent import LaurentPolynomial

DATA = resources.files("toriczeta") / "data"

ACCEPTANCE_LINES: list[str] = []


def data_path(name: str) -> str:
    return os.fspath(DATA / f"{name}.json")


def problem(name: str):
    return build_problem(load_document(data_path(name)))


def lp(terms: dict, n: int) -> LaurentPolynomial:
    return LaurentPolynomial(terms, n)


@pytest.fixture
def rng():
    return random.Random(20261015)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
