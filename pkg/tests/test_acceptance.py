"""Acceptance criteria, one test each.

Each test prints a ``PASS``/``FAIL criterion N`` line and the lines are
repeated in the pytest terminal summary. Run directly with
``python3 tests/test_acceptance.py`` for the lines alone.
"""
import sys

import pytest

from kirillov_hankel import suites

ORDERS = (-0.5, 0, 0.7 + 0.3j, 1, 2, 3)
REAL_ORDERS = (-0.5, 0, 1, 2, 3)
WEIGHTS = (1, 2, 3)
RESULTS: dict[int, str] = {}

pytestmark = pytest.mark.acceptance


def judge(number: int, title: str, reports) -> bool:
    checks = [(r, c) for r in reports for c in r.checks]
    failed = [(r, c) for r, c in checks if not c.passed]
    worst = max(checks, key=lambda rc: rc[1].max_error / rc[1].tolerance)
    r, c = failed[0] if failed else worst
    line = (f"{'PASS' if not failed else 'FAIL'} criterion {number} {title}: "
            f"{len(checks)} checks, {len(failed)} failed; "
            f"{'first failure' if failed else 'tightest'} {r.suite}/{c.name} "
            f"max_error={c.max_error:.3g} tol={c.tolerance:.3g}")
    RESULTS[number] = line
    print(line)
    return not failed


def test_inversion():
    assert judge(1, "Hankel inversion", [suites.inversion(nu) for nu in ORDERS])


def test_weber_oracle():
    assert judge(2, "Weber oracle", [suites.weber(nu) for nu in ORDERS])


def test_commuting_diagram():
    assert judge(3, "commuting diagram", [suites.diagram(nu) for nu in ORDERS])


def test_isometry():
    assert judge(4, "isometry", [suites.isometry(nu) for nu in REAL_ORDERS])


def test_derivative_intertwining():
    assert judge(5, "derivative intertwining", [suites.derivative(nu) for nu in ORDERS])


def test_representation_property():
    assert judge(6, "representation property", [suites.grouplaw(d) for d in WEIGHTS])


def test_model_intertwining():
    assert judge(7, "intertwining of models", [suites.intertwining(d) for d in WEIGHTS])


def test_lie_algebra():
    assert judge(8, "Lie algebra", [suites.lie(d) for d in WEIGHTS])


def test_k_finite_basis():
    assert judge(9, "K-finite basis", [suites.basis(d) for d in range(1, 6)])


def test_membership():
    assert judge(10, "I_d membership", [suites.membership(d) for d in WEIGHTS])


def test_gl2():
    assert judge(11, "GL2 consistency", [suites.gl2(d) for d in WEIGHTS])


def test_special_functions():
    assert judge(12, "special functions", [suites.special()])


if __name__ == "__main__":
    tests = sorted((v for k, v in globals().items() if k.startswith("test_")),
                   key=lambda t: t.__code__.co_firstlineno)
    ok = True
    for t in tests:
        try:
            t()
        except AssertionError:
            ok = False
    sys.exit(0 if ok else 1)
