import pytest

from dualorlicz import build_grid


@pytest.fixture(scope="session")
def grid2():
    return build_grid(2, 512, "uniform-angle")


@pytest.fixture(scope="session")
def grid2_small():
    return build_grid(2, 128, "uniform-angle")


@pytest.fixture(scope="session")
def grid3():
    return build_grid(3, 4000, "fibonacci")
