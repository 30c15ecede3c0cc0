import mpmath
import numpy as np
import pytest

mpmath.mp.dps = 30


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def mp_hankel(f, nu, y):
    """High-precision H_nu f(y) for a callable f of an mpf argument."""
    nu = mpmath.mpmathify(nu)
    y = mpmath.mpf(y)

    def integrand(u):
        # x = u^2, dx/x = 2 du/u
        x = u * u
        return f(x) * u * mpmath.sqrt(y) * mpmath.besselj(nu, 2 * u * mpmath.sqrt(y)) * 2 / u

    return complex(mpmath.quad(integrand, [0, 2, 5, 10, mpmath.inf]))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
