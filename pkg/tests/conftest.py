import sys

import hypothesis
import numpy as np
import pytest

from stegano_ga.synthetic import natural_cover, random_cover

hypothesis.settings.register_profile("default", deadline=None, max_examples=50)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10)
hypothesis.settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def small_cover():
    return natural_cover(64, 48, 4, seed=7)


@pytest.fixture(scope="session")
def noise_cover():
    return random_cover(96, 64, 6, seed=11)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(lines, key=lambda c: int(c.split()[0][1:])):
        terminalreporter.write_line(lines[cid])
