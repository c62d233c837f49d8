"""Shared fixtures and the --runslow switch."""

import textwrap

import pytest

import apnorm
from apnorm import modulus, phases


def pytest_addoption(parser):
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="run the desk-scale acceptance sweeps",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: desk-scale sweep, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def half():
    """Hoelder-1/2 modulus."""
    return modulus.power(0.5)


@pytest.fixture(scope="session")
def lipschitz():
    return modulus.power(1.0)


@pytest.fixture(scope="session")
def cantor_phase(half):
    return phases.cantor_primitive(half, 8)


@pytest.fixture(scope="session")
def nested(half):
    """(phase, schedule) with three levels at depth 8."""
    return phases.nested_phase(half, 3, 8)


@pytest.fixture
def write_config(tmp_path):
    """Write a config file and return its path."""

    def write(text: str, name: str = "experiment.cfg"):
        path = tmp_path / name
        path.write_text(textwrap.dedent(text).lstrip(), encoding="utf-8")
        return path

    return write


@pytest.fixture
def norm_rows():
    """Synthetic rows with norm exactly lam**0.5 for p = 1."""

    def build(
        exponent: float = 0.5, p: float = 1.0, count: int = 8, width: float = 0.0
    ):
        rows = []
        for i in range(count):
            lam = 2.0 ** (6 + i)
            value = lam**exponent
            rows.append(
                apnorm.lab.NormRow(
                    lam, p, value * (1 - width), value * (1 + width), 64, 0.0, "exact"
                )
            )
        return rows

    return build
