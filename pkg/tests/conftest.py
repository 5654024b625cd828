import random
from fractions import Fraction

import pytest

from onesided.kronecker_density import SubgroupSpec
from onesided.scalar_field import make_context, rational_context

# Lines printed at the end of the run by the acceptance module.
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture(scope="session")
def Q():
    return rational_context()


@pytest.fixture(scope="session")
def QS2():
    """Q(sqrt 2)."""
    return make_context([-2, 0, 1], (1, 2))


@pytest.fixture(scope="session")
def QS23():
    """Q(sqrt 2 + sqrt 3) together with sqrt 2, sqrt 3 inside it."""
    K = make_context([1, 0, -10, 0, 1], (3, 4))
    t = K.theta
    return K, (t ** 3 - 9 * t) / 2, (11 * t - t ** 3) / 2


def sqrt2_field():
    return make_context([-2, 0, 1], (1, 2))


def sqrt23_field():
    K = make_context([1, 0, -10, 0, 1], (3, 4))
    t = K.theta
    return K, (t ** 3 - 9 * t) / 2, (11 * t - t ** 3) / 2


def random_rational_subgroup(rng, max_s=4, max_n=5, lo=-3, hi=3):
    s = rng.randint(1, max_s)
    n = rng.randint(1, max_n)
    rows = [[Fraction(rng.randint(lo, hi), rng.choice([1, 1, 1, 2, 3])) for _ in range(n)] for _ in range(s)]
    return SubgroupSpec.of(rows, rational_context(), n)


def random_sqrt2_subgroup(rng, K, max_s=3, max_n=4):
    s = rng.randint(1, max_s)
    n = rng.randint(1, max_n)
    t = K.theta
    rows = [[K(rng.randint(-2, 2)) + rng.randint(-2, 2) * t for _ in range(n)] for _ in range(s)]
    return SubgroupSpec.of(rows, K, n)


def holds_corpus():
    """Instances with property (B), used by witness tests and acceptance."""
    K = sqrt2_field()
    L, s2, s3 = sqrt23_field()
    t = K.theta
    Q = rational_context()
    return [
        SubgroupSpec.of([[1, 0], [0, 1]], Q),
        SubgroupSpec.of([[1, 0, 0], [0, 1, 0], [0, 0, 1]], Q),
        SubgroupSpec.of([[1, 1]], Q),
        SubgroupSpec.of([[2, -1], [-1, 2]], Q),
        SubgroupSpec.of([[1, -1], [t, -t]], K),
        SubgroupSpec.of([[1, -1, 1], [t, -t, 0]], K),
        SubgroupSpec.of([[1, -1, 0], [t, -t, 0], [0, 0, 1]], K),
        SubgroupSpec.of([[1, 0], [0, 1], [s2, s3]], L),
        SubgroupSpec.of([[1, -1, 0], [0, 1, -1], [t, -t, 0], [0, t, -t]], K),
        SubgroupSpec.of([[1, 2], [3, 1]], Q),
        SubgroupSpec.of([[1, -2], [t, -2 * t]], K),
    ]


def fails_corpus():
    Q = rational_context()
    K = sqrt2_field()
    t = K.theta
    return [
        SubgroupSpec.of([[1, -1]], Q),
        SubgroupSpec.of([[2, -2]], Q),
        SubgroupSpec.of([[1, -1, 0]], Q),
        SubgroupSpec.of([[1, -2]], Q),
        SubgroupSpec.of([[1, -1, 1], [0, 1, -1]], Q),
        SubgroupSpec.of([[t, -1]], K),
        SubgroupSpec.of([[1, -1, 0], [t, 0, -t]], K),
        SubgroupSpec.of([[1, -1, 2]], Q),
    ]


@pytest.fixture
def rng():
    return random.Random(20240611)
