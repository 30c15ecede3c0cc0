"""The Hankel transform H_nu f(y) = int_0^inf f(x) sqrt(xy) J_nu(2 sqrt(xy)) dx/x.

Two independent routes are provided:

* :func:`hankel_closed_form` / :func:`hankel_profile` use Weber's integral
  ``H(x^{(nu+1)/2} e^{-b x}) = b^{-(nu+1)} y^{(nu+1)/2} e^{-y/b}`` and its
  derivatives in ``b`` to map atoms to atoms exactly;
* :func:`hankel_transform` integrates numerically after substituting
  ``x = u**2``, which turns the kernel into ``2 sqrt(y) J_nu(2 u sqrt(y)) du``.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedAtomError
from .function_model import DEFAULT_GRID, Atom, Profile, SampledFunction, make_grid
from .quadrature import DEFAULT_BUDGET, integrate_interval_family
from .special_functions import ComplexOrder, as_order, bessel_j, bessel_j_array, gamma

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class HankelKernelPoint:
    nu: ComplexOrder
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "nu", as_order(self.nu))
        if not (self.x > 0 and self.y > 0):
            raise DomainError("kernel needs x, y > 0")

    @property
    def value(self) -> complex:
        r = np.sqrt(self.x * self.y)
        return complex(r * bessel_j(self.nu, 2 * r))


def hankel_kernel(nu, x, y):
    """sqrt(xy) J_nu(2 sqrt(xy)), vectorised over x and y."""
    r = np.sqrt(np.asarray(x, float) * np.asarray(y, float))
    return r * bessel_j(nu, 2 * r)


# ------------------------------------------------------------------ closed form

def weber_terms(degree: int, sigma: complex) -> dict[tuple[int, int], complex]:
    """Expansion of (-d/db)^m [b^-sigma e^{-y/b}] as {(k, j): c} meaning c b^-(sigma+k) y^j e^{-y/b}."""
    terms = {(0, 0): 1 + 0j}
    for _ in range(degree):
        nxt: dict[tuple[int, int], complex] = {}
        for (k, j), c in terms.items():
            nxt[(k + 1, j)] = nxt.get((k + 1, j), 0) + (sigma + k) * c
            nxt[(k + 2, j + 1)] = nxt.get((k + 2, j + 1), 0) - c
        terms = nxt
    return terms


def hankel_closed_form(atom: Atom, nu, *, fold_modulation: bool = False) -> Profile:
    """Exact image of the profile x^{(nu+1)/2} * atom under H_nu.

    The atom's polynomial is handled monomial by monomial: x^m corresponds
    to (-d/db)^m of Weber's formula. Modulated atoms are refused unless
    ``fold_modulation`` is set, in which case ``exp(i b x)`` is absorbed
    into the complex rate ``a - i b`` (Weber's formula continues
    analytically to Re rate > 0).
    """
    order = as_order(nu)
    if atom.modulation != 0 and not fold_modulation:
        raise UnsupportedAtomError("closed form covers unmodulated atoms only "
                                   "(pass fold_modulation=True to absorb the modulation)")
    beta = atom.rate - 1j * atom.modulation
    sigma = order.value + 1
    log_beta = cmath.log(beta)
    out: dict[int, complex] = {}
    for m, c in enumerate(atom.coefficients):
        if c == 0:
            continue
        for (k, j), w in weber_terms(m, sigma).items():
            out[j] = out.get(j, 0) + c * w * cmath.exp(-(sigma + k) * log_beta)
    coeffs = [out.get(j, 0j) for j in range(max(out) + 1)]
    return Profile(order, (Atom(tuple(coeffs), 1 / beta, 0.0),))


def hankel_profile(f: Profile, *, fold_modulation: bool = True) -> Profile:
    """Closed-form H_nu of a whole profile (same side, merged atoms)."""
    total = Profile.zero(f.order, f.side)
    for atom in f.atoms:
        image = hankel_closed_form(atom, f.order, fold_modulation=fold_modulation)
        total = total + Profile(f.order, image.atoms, f.side)
    return total


# ------------------------------------------------------------------ quadrature

def _envelope_cutoff(f: Profile, threshold: float) -> float:
    """An x beyond which |f| stays below ``threshold`` (bound by atom moduli)."""
    xs = np.geomspace(1e-2, 1e5, 2000)
    env = np.zeros_like(xs)
    s_re = f.exponent.real
    for a in f.atoms:
        poly = np.zeros_like(xs)
        for c in reversed(a.coefficients):
            poly = poly * xs + abs(c)
        env += poly * np.exp(-a.rate.real * xs)
    env *= xs ** s_re
    above = np.nonzero(env > threshold)[0]
    if above.size == 0:
        return 1.0
    return float(xs[min(above[-1] + 1, xs.size - 1)] * 1.1)


def hankel_values(f: Profile, y, tol: float = DEFAULT_TOL, *, budget: int | None = None):
    """Quadrature values and error estimates of H_nu f at the points ``y``.

    ``tol`` is absolute, scaled by the largest coefficient modulus of f's
    atoms so that it behaves relatively for unnormalised inputs.
    """
    nu = f.order
    ys = np.asarray(y, dtype=float).ravel()
    if np.any(ys <= 0):
        raise DomainError("Hankel transform is evaluated at y > 0")
    if f.is_zero:
        return np.zeros(ys.size, complex), np.zeros(ys.size)
    scale = max(max(abs(c) for c in a.coefficients) for a in f.atoms)
    abs_tol = tol * scale
    # J_nu of complex order can exceed 1 by about exp(pi |Im nu| / 2)
    growth = np.exp(0.5 * np.pi * abs(nu.value.imag))
    x_max = _envelope_cutoff(f, 1e-3 * abs_tol / (growth * (1 + np.sqrt(ys.max()))))
    u_max = np.sqrt(x_max)
    root_y = np.sqrt(ys)
    value = nu.value

    def integrand(u, m):
        ry = root_y[m]
        return 2 * ry * f.local(u * u) * bessel_j_array(value, 2 * u * ry)

    res = integrate_interval_family(integrand, ys.size, 0.0, u_max, abs_tol,
                                    oscillation=2 * root_y,
                                    budget=budget or DEFAULT_BUDGET * ys.size)
    return res.values, res.errors


def hankel_transform(f: Profile, out_grid=DEFAULT_GRID, tol: float = DEFAULT_TOL) -> SampledFunction:
    """H_nu f sampled on ``out_grid`` by adaptive quadrature."""
    grid = make_grid(out_grid)
    values, _ = hankel_values(f, grid, tol)
    return SampledFunction(grid, values, f.order, out_grid if isinstance(out_grid, str) else "")


# ------------------------------------------------------------------ pairings

def _pairing(f: Profile, g: Profile, conjugate: bool) -> complex:
    if f.side != g.side:
        raise DomainError("profiles live on different half-lines")
    s_g = g.exponent.conjugate() if conjugate else g.exponent
    total = 0j
    for a in f.atoms:
        for b in g.atoms:
            bc = [c.conjugate() for c in b.coefficients] if conjugate else list(b.coefficients)
            lam = b.exponent.conjugate() if conjugate else b.exponent
            rate = -(a.exponent + lam)
            log_rate = cmath.log(rate)
            base = f.exponent + s_g
            for i, ca in enumerate(a.coefficients):
                for j, cb in enumerate(bc):
                    power = base + i + j
                    total += ca * cb * complex(gamma(power)) * cmath.exp(-power * log_rate)
    return total


def inner_product(f: Profile, g: Profile) -> complex:
    """<f, g> = int_0^inf f(x) conj(g(x)) dx/x in closed form."""
    return _pairing(f, g, conjugate=True)


def bilinear_product(f: Profile, g: Profile) -> complex:
    """int_0^inf f(x) g(x) dx/x in closed form (no conjugation)."""
    return _pairing(f, g, conjugate=False)


__all__ = [
    "HankelKernelPoint", "hankel_kernel", "weber_terms", "hankel_closed_form", "hankel_profile",
    "hankel_values", "hankel_transform", "inner_product", "bilinear_product", "DEFAULT_TOL",
]
