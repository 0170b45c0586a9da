import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from pesym.fields import PhysConsts, sample_points

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_ACCEPTANCE = {}


@pytest.fixture
def consts():
    return PhysConsts()


@pytest.fixture
def rotating():
    return PhysConsts(f=1.0)


@pytest.fixture(scope="session")
def pts():
    return sample_points(0, 1000)


@pytest.fixture(scope="session")
def pts_small():
    return sample_points(7, 120)


@pytest.fixture
def criterion():
    """Record a named acceptance line: ``criterion(n, ok, detail)``."""

    def record(n, ok, detail=""):
        prev = _ACCEPTANCE.get(n)
        ok = bool(ok) and (prev is None or prev[0])
        details = detail if prev is None or not prev[1] else f"{prev[1]}; {detail}"
        _ACCEPTANCE[n] = (ok, details)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def rand_state(rng, n):
    z = rng.uniform(-1.0, 1.0, (9, n))
    z[3] = rng.uniform(0.2, 1.0, n)
    return z


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
