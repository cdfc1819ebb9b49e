import pytest

from fleetmin import kernels
from fleetmin.model import Euclidean, Line1D, make_instance

FIXTURE_A = [(0, 0, 10, 10), (12, 13, 20, 21), (0, 2, 5, 7)]
FIXTURE_B = [(0, 0, 1, 1), (2, 3, 3, 4), (4, 6, 5, 7)]

AVAILABLE_BACKENDS = [b for b in kernels.BACKENDS if b != "numba" or kernels.HAVE_NUMBA]


@pytest.fixture
def fixture_a():
    return make_instance(FIXTURE_A, Line1D())


@pytest.fixture
def fixture_b():
    return make_instance(FIXTURE_B, Line1D())


@pytest.fixture
def fixture_b_delta():
    return make_instance(FIXTURE_B, Line1D(), delta=1.0)


@pytest.fixture
def single_trip():
    return make_instance([((0.0, 0.0), 0.0, (1.0, 1.0), 2.0)], Euclidean())


@pytest.fixture(params=AVAILABLE_BACKENDS)
def backend(request):
    with kernels.use_backend(request.param):
        yield request.param


# acceptance criteria report, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
