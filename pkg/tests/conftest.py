import numpy as np
import pytest
from hypothesis import strategies as st

from ewlgame.protocol import GameConfig, StrategyParams

thetas = st.floats(0, np.pi, allow_nan=False)
phis = st.floats(0, np.pi / 2, allow_nan=False)
lambdas = st.floats(0, np.pi / 2, allow_nan=False)
strategies_ = st.builds(StrategyParams, thetas, phis)


@pytest.fixture
def cfg():
    return GameConfig()


def random_profiles(n, seed, lam=None):
    """Seeded uniform samples over the strategy domain, one row per sample."""
    rng = np.random.default_rng(seed)
    out = np.column_stack([
        rng.uniform(0, np.pi, n),
        rng.uniform(0, np.pi / 2, n),
        rng.uniform(0, np.pi, n),
        rng.uniform(0, np.pi / 2, n),
        rng.uniform(0, np.pi / 2, n) if lam is None else np.full(n, lam),
    ])
    return out


# one line per acceptance criterion, filled by test_acceptance
ACCEPTANCE_RESULTS = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for mark in getattr(report, "user_properties", ()):
        if mark[0] == "criterion":
            ACCEPTANCE_RESULTS[mark[1]] = report.passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ACCEPTANCE_RESULTS[n] else 'FAIL'}")
