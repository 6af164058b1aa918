import numpy as np
import pytest

from ghmmcanon import zoo

# criterion number -> (title, passed, detail); filled by test_acceptance.py
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        title, passed, detail = ACCEPTANCE_RESULTS[num]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {num} [{status}] {title}: {detail}")


@pytest.fixture(scope="session")
def tight_hmm():
    return zoo.load("tight_hmm").model


@pytest.fixture(scope="session")
def tight_qhmm():
    return zoo.load("tight_qhmm").model


@pytest.fixture(scope="session")
def loose_hmm():
    return zoo.load("loose_hmm").model


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
