import pytest

from helpers import ACCEPTANCE, SEED, example8
from qgr.oracles import finite_gk_corpus, mixed_corpus


@pytest.fixture
def ex8():
    return example8()


@pytest.fixture(scope="session")
def seed():
    return SEED


@pytest.fixture(scope="session")
def finite_corpus():
    return finite_gk_corpus(SEED, 200)


@pytest.fixture(scope="session")
def small_finite_corpus():
    return finite_gk_corpus(SEED + 1, 50)


@pytest.fixture(scope="session")
def mixed():
    return mixed_corpus(SEED + 2, 400)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
