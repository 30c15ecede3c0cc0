import math

import mpmath
import numpy as np
import pytest

from kirillov_hankel.errors import QuadratureError
from kirillov_hankel.quadrature import (QuadratureResult, integrate_halfline, integrate_interval,
                                        integrate_line, wynn_epsilon_step)
from kirillov_hankel.special_functions import bessel_j


def test_result_validation():
    with pytest.raises(ValueError):
        QuadratureResult(1.0, -1.0, 1)
    with pytest.raises(ValueError):
        QuadratureResult(1.0, 0.0, 0)


class TestHalfline:
    def test_exponential(self):
        r = integrate_halfline(lambda x: np.exp(-x), 1.0, 0.0, 1e-12)
        assert abs(r.value - 1) <= 1e-12

    def test_weber_instance(self):
        r = integrate_halfline(lambda u: u * np.exp(-u * u) * bessel_j(0, 2 * u), 1.0, 2.0, 1e-12)
        assert abs(r.value - 0.18393972058572) <= 1e-12

    def test_oscillatory(self):
        r = integrate_halfline(lambda x: x * np.exp(-x) * np.exp(3j * x), 1.0, 3.0, 1e-12)
        assert abs(r.value - (-0.08 + 0.06j)) <= 1e-12

    def test_algebraic_tail(self):
        r = integrate_halfline(lambda x: 1 / (1 + x * x), power=2, tol=1e-12)
        assert abs(r.value - math.pi / 2) <= 1e-11

    def test_budget(self):
        with pytest.raises(QuadratureError):
            integrate_halfline(lambda x: np.exp(-x) * np.sin(1e4 * x * x), 1.0, 0.0, 1e-14,
                               budget=2000)


class TestLine:
    def test_gaussian(self):
        r = integrate_line(lambda x: np.exp(-x * x), 1.0, 0.0, 1e-12)
        assert abs(r.value - 1.77245385090552) <= 1e-12

    def test_lorentzian(self):
        r = integrate_line(lambda x: 1 / (1 + x * x), power=2, tol=1e-11)
        assert abs(r.value - 3.14159265358979) <= 1e-10

    def test_odd(self):
        r = integrate_line(lambda x: np.sign(x) * np.exp(-np.abs(x)), 1.0, 0.0, 1e-12)
        assert abs(r.value) <= 1e-12


def _weber_corpus():
    """Weber integrals int_0^inf u^{nu+1} e^{-a u^2} J_nu(b u) du = b^nu/(2a)^{nu+1} e^{-b^2/(4a)}."""
    cases = []
    for nu in (0.5, 1, 2, 1 + 0.5j):
        for a in (1, 2 - 1j):
            for b in (1, 2):
                cases.append((nu, a, b))
    return cases


@pytest.mark.parametrize("nu,a,b", _weber_corpus())
def test_weber_corpus(nu, a, b):
    tol = 1e-10
    r = integrate_halfline(lambda u: u ** (nu + 1) * np.exp(-a * u * u) * bessel_j(nu, b * u),
                           1.0, b, tol)
    mp = mpmath.mpmathify
    want = complex(mpmath.quad(lambda u: u ** (mp(nu) + 1) * mpmath.exp(-mp(a) * u * u)
                               * mpmath.besselj(mp(nu), b * u), [0, mpmath.inf]))
    assert abs(r.value - want) <= tol
    # the closed form, for the record
    closed = b ** nu / (2 * a) ** (nu + 1) * np.exp(-b * b / (4 * a))
    assert abs(closed - want) <= 1e-14


def test_error_estimate_coverage():
    cases = [(lambda x: np.exp(-x), 1.0, 0.0, 1.0),
             (lambda x: x * np.exp(-x) * np.exp(3j * x), 1.0, 3.0, -0.08 + 0.06j),
             (lambda x: np.exp(-2 * x) * np.cos(20 * x), 2.0, 20.0, 2 / 404),
             (lambda x: x ** 2 * np.exp(-1.5 * x), 1.5, 0.0, 2 / 1.5 ** 3)]
    covered = 0
    for f, rate, osc, want in cases:
        r = integrate_halfline(f, rate, osc, 1e-8)
        covered += abs(r.value - want) <= max(r.error_estimate, 1e-15)
    assert covered >= 0.95 * len(cases)


def test_deterministic():
    f = lambda x: np.exp(-x) * np.cos(7 * x) * np.sqrt(x)
    a = integrate_halfline(f, 1.0, 7.0, 1e-12)
    b = integrate_halfline(f, 1.0, 7.0, 1e-12)
    assert a.value == b.value and a.error_estimate == b.error_estimate


def test_interval_orientation():
    r = integrate_interval(np.cos, math.pi, 0.0, 1e-12)
    assert abs(r.value) <= 1e-12
    r = integrate_interval(np.sqrt, 0.0, 4.0, 1e-12)
    assert abs(r.value - 16 / 3) <= 1e-11


def test_wynn_accelerates_alternating_series():
    diag, est = [], None
    partial = 0.0
    for k in range(16):
        partial += (-1) ** k / (k + 1)
        diag, est = wynn_epsilon_step(diag, np.array([partial]))
    assert abs(est[0] - math.log(2)) <= 1e-9
