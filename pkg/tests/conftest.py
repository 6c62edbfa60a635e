import os

import numpy as np
import pytest
from hypothesis import settings

from subsetar import kernels

ACCEPTANCE = []

# reproducible property runs; HYPOTHESIS_PROFILE=explore for fresh examples
settings.register_profile("default", derandomize=True, deadline=None)
settings.register_profile("explore", deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_addoption(parser):
    parser.addoption("--extended", action="store_true", default=False,
                     help="run the slow extended-tier checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--extended"):
        return
    skip = pytest.mark.skip(reason="extended tier; run with --extended")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)


@pytest.fixture
def record():
    """Log one acceptance line (shown in the terminal summary) and return ok."""

    def _record(criterion: str, ok, detail: str = "", status=None):
        status = status or ("PASS" if ok else "FAIL")
        ACCEPTANCE.append(f"[{status}] {criterion}: {detail}")
        return ok

    return _record


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request):
    return kernels.backends()[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_spec(rng, pmax=8):
    p = int(rng.integers(1, pmax + 1))
    others = rng.permutation(np.arange(1, p))[: int(rng.integers(0, p))]
    return tuple(sorted({p, *map(int, others)}))


def acvf_oracle(phi, sigma2, nlags):
    """Autocovariances of a stationary AR(p) by solving the Yule-Walker
    system for gamma_0..gamma_p and extending by the recursion."""
    phi = np.asarray(phi, float)
    p = phi.size
    A = np.zeros((p + 1, p + 1))
    for k in range(p + 1):
        A[k, k] += 1.0
        for j in range(1, p + 1):
            A[k, abs(k - j)] -= phi[j - 1]
    b = np.zeros(p + 1)
    b[0] = sigma2
    g = list(np.linalg.solve(A, b))
    for k in range(p + 1, nlags + 1):
        g.append(float(np.dot(phi, g[k - 1:k - p - 1 if k - p - 1 >= 0 else None:-1])))
    return np.array(g[: nlags + 1])
