import numpy as np
import pytest

from ocx.kernels import KernelSpec
from ocx.ocsvm import make_model

FAMILY_Q = [(f, q) for f in ("exponential", "tstudent") for q in (1.0, 2.0, 4.0)]


def random_kernel(rng, family, q):
    if family == "exponential":
        return KernelSpec.exponential(rng.uniform(0.5, 2.0), q)
    return KernelSpec.tstudent(rng.uniform(0.5, 2.0), q)


def random_model(rng, family="exponential", q=2.0, m=None, d=None, spread=1.0):
    m = m or int(rng.integers(1, 51))
    d = d or int(rng.integers(1, 21))
    U = spread * rng.normal(size=(m, d))
    alphas = rng.dirichlet(np.ones(m))
    # keep coefficients away from zero so that -log(alpha) stays moderate
    alphas = np.maximum(alphas, 1e-6)
    return make_model(U, alphas, random_kernel(rng, family, q))


def random_point(rng, model, scale=2.0):
    return scale * rng.normal(size=model.dim)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
