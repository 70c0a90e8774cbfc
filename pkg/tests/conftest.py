import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cuspidal.surfaces import EdgeCoefficients

settings.register_profile(
    "cuspidal", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("cuspidal")


@pytest.fixture(scope="session")
def folded_samples():
    rng = np.random.default_rng(1234)
    return [EdgeCoefficients.random(rng) for _ in range(12)]


@pytest.fixture(scope="session")
def prefold_samples():
    rng = np.random.default_rng(4321)
    return [EdgeCoefficients.random(rng, mode="prefold") for _ in range(8)]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section(f"acceptance criteria (seed {_seed()})")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def _seed():
    from cuspidal.verify import DEFAULT_SEED

    return DEFAULT_SEED
