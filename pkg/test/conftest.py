import pytest

from lipsolve import config
from lipsolve.builders import (
    build_binomial_model,
    build_example1_model,
    build_example2_model,
    example2_predictive,
)


def pytest_addoption(parser):
    """
    Adds the command line option --slow.

    :param parser: The parser object. Please see <https://docs.pytest.org/en/latest/reference.html#_pytest.hookspec.pytest_addoption>`_
    :type Parser object: For more information please see <https://docs.pytest.org/en/latest/reference.html#_pytest.config.Parser>`_
    """
    parser.addoption(
        "--slow",
        action="store_true",
        help="Also runs the full sweep and the large binomial solves",
        default=False,
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs only with --slow")


@pytest.hookimpl
def pytest_collection_modifyitems(config, items):
    if config.getoption("slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def grid():
    return config.DEFAULT_GRID


@pytest.fixture
def example1(grid):
    return build_example1_model(grid)


@pytest.fixture
def example2():
    return build_example2_model(0.5)


@pytest.fixture
def example2_q():
    return example2_predictive()


@pytest.fixture
def coin(grid):
    """No past data, one future trial."""
    return build_binomial_model(0, 1, grid)
