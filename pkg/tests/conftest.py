import os

import pytest
from hypothesis import HealthCheck, settings

from odo.expr import load_example
from odo.field_tower import hyperbolic, ratfunc_x
from odo.operators import DiffOp

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=50, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_terminal_summary(terminalreporter):
    from shared import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def K():
    return ratfunc_x()


@pytest.fixture(scope="session")
def H():
    return hyperbolic()


@pytest.fixture(scope="session")
def Dx(K):
    return DiffOp.D(K)


@pytest.fixture(scope="session")
def x(K):
    return K.gen


@pytest.fixture(scope="session")
def examples():
    names = ["EulerL4", "EulerB6", "Ex3genL", "Ex3genA1", "Ex3genA2", "ExO5L", "ExO5A1", "ExO5A3",
             "SchrL", "SchrA", "WeylL"]
    return {n: load_example(n) for n in names}
