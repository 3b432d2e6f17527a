import numpy as np
import pytest

from murlab import _fallback
from murlab.quantum import builtin_bases

try:
    from murlab import _kernels
except ImportError:  # pragma: no cover
    _kernels = None

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def bases():
    return builtin_bases()


@pytest.fixture(scope="session")
def pair(bases):
    return [bases["A"], bases["B"]]


@pytest.fixture(scope="session")
def triple(bases):
    return [bases["C1"], bases["C2"], bases["C3"]]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


BACKENDS = [pytest.param(_fallback, id="python")]
if _kernels is not None:
    BACKENDS.append(pytest.param(_kernels, id="compiled"))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def random_unitary(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
