import sys

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240601))


def random_complex(rng, d, scale=1.0):
    return scale * (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))


def random_contraction(rng, d):
    G = random_complex(rng, d)
    U, s, Vh = np.linalg.svd(G)
    return (U * np.minimum(s / s.max() * 1.2, 1.0)) @ Vh


JORDAN = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
