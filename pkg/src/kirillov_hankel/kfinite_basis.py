"""The Laguerre orthonormal system e_n = c_n x^{(d+1)/2} e^{-x} L_n^d(2x).

Orthonormal for <f, g> = int_0^inf f conj(g) dx/x with
c_n = (2^{d+1} n! / (n+d)!)^{1/2}. Inner products use the Gamma closed
form. In floating point the monomial coefficients of L_n^d alternate and
cancel badly for large n, so the Gram matrix is also available in exact
rational arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .function_model import DEFAULT_GRID, Atom, Profile, Side, make_grid
from .hankel import hankel_values, inner_product
from .representation import X, Y, act_lie


def _check_weight(d) -> int:
    if int(d) != d or d < 1:
        raise DomainError(f"d must be a positive integer, got {d}")
    return int(d)


def normalisation(n: int, d: int) -> float:
    return math.sqrt(2 ** (d + 1) * math.factorial(n) / math.factorial(n + d))


@dataclass(frozen=True)
class BasisVector:
    n: int
    d: int
    profile: Profile

    def __post_init__(self):
        if self.profile.atoms and self.profile.atoms[0].degree != self.n:
            raise DomainError("polynomial degree must equal n")

    def __call__(self, x):
        return self.profile(x)


def scaled_laguerre(n: int, d: int) -> list[Fraction]:
    """Exact monomial coefficients of L_n^d(2x)."""
    return [Fraction((-2) ** k * math.comb(n + d, n - k), math.factorial(k)) for k in range(n + 1)]


def basis_vector(n: int, d: int, side: Side = Side.POSITIVE) -> BasisVector:
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n}")
    n, d = int(n), _check_weight(d)
    c = normalisation(n, d)
    coeffs = tuple(complex(c * float(a)) for a in scaled_laguerre(n, d))
    return BasisVector(n, d, Profile(d, (Atom(coeffs, 1.0),), side))


def expand(f: Profile, d: int | None = None, N: int = 10) -> np.ndarray:
    """Coefficients <f, e_n> for n = 0..N."""
    d = _check_weight(f.order.value.real if d is None else d)
    if f.order.value != d:
        raise DomainError(f"profile order {f.order} differs from d = {d}")
    return np.array([inner_product(f, basis_vector(n, d, f.side).profile) for n in range(N + 1)])


def norm_squared(f: Profile) -> float:
    return float(inner_product(f, f).real)


def parseval_residuals(f: Profile, N: int) -> np.ndarray:
    """||f||^2 - sum_{n<=k} |c_n|^2 for k = 0..N."""
    coeffs = expand(f, N=N)
    return norm_squared(f) - np.cumsum(np.abs(coeffs) ** 2)


def _exact_pairing(n: int, m: int, d: int) -> float:
    # int x^{d+1+i+j} e^{-2x} dx/x = (d+i+j)! / 2^{d+1+i+j}; the 2^{d+1} cancels c_n c_m
    a, b = scaled_laguerre(n, d), scaled_laguerre(m, d)
    total = sum(ai * bj * Fraction(math.factorial(d + i + j), 2 ** (i + j))
                for i, ai in enumerate(a) for j, bj in enumerate(b))
    scale = Fraction(math.factorial(n) * math.factorial(m),
                     math.factorial(n + d) * math.factorial(m + d))
    if n == m:
        return float(total * Fraction(math.factorial(n), math.factorial(n + d)))
    return float(total) * math.sqrt(scale)


def gram_matrix(N: int, d: int, *, exact: bool = True) -> np.ndarray:
    """<e_n, e_m> for n, m <= N; ``exact=False`` pairs the float profiles instead."""
    d = _check_weight(d)
    if exact:
        return np.array([[_exact_pairing(n, m, d) for m in range(N + 1)] for n in range(N + 1)])
    vecs = [basis_vector(n, d).profile for n in range(N + 1)]
    return np.array([[inner_product(a, b) for b in vecs] for a in vecs])


def gram_deviation(N: int, d: int, *, exact: bool = True) -> float:
    return float(np.max(np.abs(gram_matrix(N, d, exact=exact) - np.eye(N + 1))))


def hankel_fixed_point_error(d: int, grid=None, tol: float = 1e-13) -> float:
    """sup |H_d e_0 - e_0| over a grid, with H_d computed by quadrature."""
    e0 = basis_vector(0, d).profile
    xs = make_grid(DEFAULT_GRID if grid is None else grid)
    values, _ = hankel_values(e0, xs, tol=tol)
    return float(np.max(np.abs(values - e0.local(xs))))


@dataclass(frozen=True)
class EigenResult:
    n: int
    d: int
    eigenvalue: complex
    residual: float


def compact_generator(f: Profile) -> Profile:
    """i(X - Y) applied through the Lie action."""
    return (act_lie(X, f) - act_lie(Y, f)).scaled(1j)


def k_eigen_check(n: int, d: int) -> EigenResult:
    """Rayleigh quotient of i(X-Y) at e_n and the norm of what is left over."""
    e = basis_vector(n, d).profile
    image = compact_generator(e)
    lam = inner_product(image, e)
    rest = image - e.scaled(lam)
    return EigenResult(n, d, complex(lam), math.sqrt(max(norm_squared(rest), 0.0)))


__all__ = [
    "BasisVector", "basis_vector", "normalisation", "scaled_laguerre", "expand", "norm_squared",
    "parseval_residuals", "gram_matrix", "gram_deviation", "hankel_fixed_point_error",
    "EigenResult", "compact_generator", "k_eigen_check",
]
