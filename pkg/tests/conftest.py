import numpy as np
import pytest

from cheapquad import harness

# criterion number -> (passed, detail), filled by tests/test_acceptance.py
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}
ACCEPTANCE_TITLES = {
    1: "orthogonality identity of the auxiliary rule",
    2: "spline exactness at machine precision",
    3: "rule cardinalities",
    4: "weight 1-norm bound",
    5: "stability bands and trend",
    6: "Christoffel bound on the square",
    7: "QMC compression fidelity",
    8: "compression saturation at the QMC error",
    9: "moment oracles",
    10: "fixed-point compression",
    11: "known-value checks",
}


@pytest.fixture
def record_criterion():
    def record(number: int, passed: bool, detail: str = "") -> None:
        ACCEPTANCE_RESULTS[number] = (bool(passed), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k, title in ACCEPTANCE_TITLES.items():
        if k in ACCEPTANCE_RESULTS:
            ok, detail = ACCEPTANCE_RESULTS[k]
            terminalreporter.write_line(f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        else:
            terminalreporter.write_line(f"criterion {k:2d} NOT RUN  {title}")


@pytest.fixture(scope="session")
def element_a():
    return harness.element_a()


@pytest.fixture(scope="session")
def element_b():
    return harness.element_b()


@pytest.fixture(scope="session")
def omega3():
    return harness.omega3()


@pytest.fixture(scope="session")
def omega4():
    return harness.omega4()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
