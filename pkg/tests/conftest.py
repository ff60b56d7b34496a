import numpy as np
import pytest

from cnrange.crange import Budget


def rand_c(rng, shape=(2, 2)):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


# small budget for unit tests; the acceptance suite uses its own
QUICK = Budget(orbit_samples=2048, cloud_samples=20000, angles=512)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        ok, msg = RESULTS[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {msg}")
