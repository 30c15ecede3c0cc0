"""Operators linking half-line profiles to functions on the real line.

* ``T_nu f(z) = (2 pi)^{-1/2} int_0^inf x^{(nu-1)/2} f(x) e^{ixz} dx`` (and its
  mirror for negative-side profiles),
* the Weyl operator ``W_nu phi(x) = |x|^{-nu-1} e^{sgn(x) pi i (nu+1)/2} phi(-1/x)``,
* ``M_d phi(y) = |y|^{(1-d)/2} (2 pi)^{-1/2} int phi(x) e^{-ixy} dx``, the
  inverse of ``T_d`` on pairs of profiles,
* the passage between functions ``phi`` on the line and functions ``F`` on
  the rotation group, the weighted norm, the functionals ``l_{lambda,n}``
  and a least-squares check of the expansion ``phi(x) ~ sum a_m x^-m``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DivergenceError, DomainError, FitError
from .function_model import Profile, Side
from .quadrature import (DEFAULT_BUDGET, integrate_halfline_family, integrate_line,
                         integrate_line_family)
from .special_functions import as_order, bessel_k, gamma

_INV_SQRT_2PI = 1 / math.sqrt(2 * math.pi)


class Provenance(enum.Enum):
    CLOSED_FORM = "closed-form"
    FROM_T_TRANSFORM = "from-T-transform"


@dataclass(frozen=True)
class InducedFunction:
    """A function phi on the real line standing for a vector of weight ``weight``.

    ``evaluator`` must be vectorised. ``weyl`` optionally supplies the
    Weyl image in closed form; otherwise it is computed from the definition.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    weight: int
    provenance: Provenance = Provenance.CLOSED_FORM
    weyl: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if int(self.weight) != self.weight or self.weight < 1:
            raise DomainError("weight must be a positive integer")
        object.__setattr__(self, "weight", int(self.weight))

    def __call__(self, x):
        x_arr = np.asarray(x, dtype=float)
        out = np.asarray(self.evaluator(x_arr), dtype=complex)
        return out[()] if out.ndim == 0 else out

    def weyl_image(self, x):
        if self.weyl is not None:
            out = np.asarray(self.weyl(np.asarray(x, dtype=float)), dtype=complex)
            return out[()] if out.ndim == 0 else out
        return weyl_op(self, self.weight, x)

    def scaled(self, c: complex) -> "InducedFunction":
        c = complex(c)
        weyl = None if self.weyl is None else (lambda x, w=self.weyl: c * w(x))
        return InducedFunction(lambda x: c * self.evaluator(x), self.weight, self.provenance,
                               weyl, self.label)

    def translated(self, shift: float) -> "InducedFunction":
        """x -> phi(x + shift)."""
        return InducedFunction(lambda x: self.evaluator(np.asarray(x) + shift), self.weight,
                               self.provenance, None, f"{self.label}(x+{shift})")


@dataclass(frozen=True)
class AsymptoticReport:
    coefficients: tuple[complex, ...]
    residual: float
    condition: float = 0.0

    def __post_init__(self):
        if not self.residual >= 0:
            raise ValueError("residual must be nonnegative")

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def is_member(self, d: int, tol: float = 1e-5, residual_tol: float = 1e-3) -> bool:
        """True when a_0..a_d vanish and both tails share one expansion.

        The residual includes truncation of the fitted series, so it is
        judged relative to |a_{d+1}| with the looser ``residual_tol``.
        """
        low = max((abs(a) for a in self.coefficients[: d + 1]), default=0.0)
        lead = abs(self.coefficients[d + 1]) if len(self.coefficients) > d + 1 else 0.0
        return low <= tol and self.residual <= residual_tol * max(1.0, lead)


# ------------------------------------------------------------------ T transform

def _t_closed_one_side(f: Profile, z: np.ndarray) -> np.ndarray:
    nu = f.order.value
    sign = f.side.sign
    total = np.zeros(z.shape, dtype=complex)
    for atom in f.atoms:
        beta = atom.rate - 1j * atom.modulation
        log_base = np.log(beta - sign * 1j * z)
        for k, c in enumerate(atom.coefficients):
            if c == 0:
                continue
            p = nu + k + 1
            total += c * complex(gamma(p)) * np.exp(-p * log_base)
    return _INV_SQRT_2PI * total


def t_transform(f: Profile, z):
    """Closed form of T_nu f at z (vectorised).

    Each monomial contributes ``Gamma(nu+k+1) (beta - i z)^{-(nu+k+1)}`` with
    ``beta = rate - i*modulation`` (``beta + i z`` on the negative side).
    """
    z_arr = np.asarray(z, dtype=float)
    out = _t_closed_one_side(f, z_arr)
    return out[()] if out.ndim == 0 else out


def t_transform_quadrature(f: Profile, z, tol: float = 1e-12):
    """T_nu f at z by direct integration (independent of :func:`t_transform`)."""
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    nu = f.order.value
    sign = f.side.sign
    if f.is_zero:
        return np.zeros(z_arr.shape, complex) if np.ndim(z) else 0j

    def integrand(x, m):
        with np.errstate(divide="ignore", invalid="ignore"):
            weight = np.where(x > 0, np.exp(0.5 * (nu - 1) * np.log(np.where(x > 0, x, 1.0))), 0)
        return weight * f.local(x) * np.exp(sign * 1j * x * z_arr[m])

    scale = max(max(abs(c) for c in a.coefficients) for a in f.atoms)
    res = integrate_halfline_family(integrand, z_arr.size, f.min_rate,
                                    np.abs(z_arr) + f.max_frequency, tol * scale,
                                    budget=DEFAULT_BUDGET * z_arr.size)
    out = _INV_SQRT_2PI * res.values
    return out if np.ndim(z) else complex(out[0])


def t_image(f_plus: Profile | None, f_minus: Profile | None = None, d: int | None = None,
            ) -> InducedFunction:
    """phi = T_d f_plus + T_d f_minus as an induced function of weight d."""
    parts = [p for p in (f_plus, f_minus) if p is not None]
    if not parts:
        raise DomainError("need at least one profile")
    if d is None:
        d = parts[0].order.value.real
    for p in parts:
        if p.order.value != d:
            raise DomainError(f"profile order {p.order} differs from weight {d}")
    if f_plus is not None and f_plus.side is not Side.POSITIVE:
        raise DomainError("f_plus must be a positive-side profile")
    if f_minus is not None and f_minus.side is not Side.NEGATIVE:
        raise DomainError("f_minus must be a negative-side profile")

    def evaluator(z):
        z = np.asarray(z, dtype=float)
        total = np.zeros(z.shape, dtype=complex)
        for p in parts:
            total = total + _t_closed_one_side(p, z)
        return total

    return InducedFunction(evaluator, int(d), Provenance.FROM_T_TRANSFORM, label="T")


# ------------------------------------------------------------------ Weyl operator

def weyl_op(phi, nu, x):
    """W_nu phi(x) = |x|^{-nu-1} e^{sgn(x) pi i (nu+1)/2} phi(-1/x), x != 0."""
    nu = as_order(nu).value
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr == 0):
        raise DomainError("the Weyl operator is undefined at x = 0")
    ax = np.abs(x_arr)
    phase = np.exp(np.sign(x_arr) * 0.5j * np.pi * (nu + 1))
    out = np.exp(-(nu + 1) * np.log(ax)) * phase * np.asarray(phi(-1 / x_arr), dtype=complex)
    return out[()] if out.ndim == 0 else out


# ------------------------------------------------------------------ M_d

def fourier_values(phi, y, d: int, tol: float = 1e-12, *, scale: float | None = None):
    """(2 pi)^{-1/2} int phi(x) e^{-ixy} dx at each y, with error estimates.

    ``phi`` must decay like |x|^-(d+1).
    """
    ys = np.atleast_1d(np.asarray(y, dtype=float))

    def integrand(x, m):
        return np.asarray(phi(x), dtype=complex) * np.exp(-1j * x * ys[m])

    res = integrate_line_family(integrand, ys.size, 1.0, np.abs(ys), tol, power=d + 1,
                                scale=scale, budget=DEFAULT_BUDGET * ys.size)
    return _INV_SQRT_2PI * res.values, _INV_SQRT_2PI * res.errors


def m_transform(phi, y, d: int | None = None, tol: float = 1e-12):
    """M_d phi(y) = |y|^{(1-d)/2} phi_hat(y) by quadrature (y != 0, vectorised)."""
    if d is None:
        d = phi.weight
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr == 0):
        raise DomainError("M_d is evaluated at y != 0")
    values, _ = fourier_values(phi, y_arr.ravel(), d, tol)
    out = (np.abs(y_arr.ravel()) ** ((1 - d) / 2) * values).reshape(y_arr.shape)
    return out[()] if out.ndim == 0 else out


# ------------------------------------------------------------------ examples

def phi_zero(d: int) -> InducedFunction:
    """(1 + x^2)^{-(d+1)/2}."""
    return InducedFunction(lambda x: (1 + np.asarray(x) ** 2) ** (-(d + 1) / 2), d,
                           label="phi0")


def phi_lowest(d: int) -> InducedFunction:
    """(1 + x^2)^{-(d+1)/2} e^{i(d+1) arctan x} = (1 - ix)^{-(d+1)}."""
    return InducedFunction(lambda x: (1 - 1j * np.asarray(x)) ** (-(d + 1)), d, label="phiF0")


def phi_zero_fourier(d: int, y):
    """Fourier transform of phi_zero: 2^{(1-d)/2}/Gamma((d+1)/2) |y|^{d/2} K_{d/2}(|y|)."""
    ay = np.abs(np.asarray(y, dtype=float))
    const = 2 ** ((1 - d) / 2) / math.gamma((d + 1) / 2)
    return const * ay ** (d / 2) * bessel_k(d / 2, ay)


# ------------------------------------------------------------------ induced picture

def induced_from_phi(phi: InducedFunction, theta, *, tail: AsymptoticReport | None = None):
    """F_phi(r(theta)) for theta in (0, pi].

    Uses F(r(theta)) = (-1)^{d+1} (1+x^2)^{(d+1)/2} phi(x) with x = -cot(theta),
    which makes F(w n(x)) = phi(x); at theta = pi the value is the limit
    (-1)^{d+1} a_{d+1}, read from the asymptotic fit.
    """
    d = phi.weight
    th = np.asarray(theta, dtype=float)
    if np.any((th <= 0) | (th > np.pi)):
        raise DomainError("theta must lie in (0, pi]")
    sign = -1.0 if (d + 1) % 2 else 1.0
    at_pi = th == np.pi
    out = np.empty(th.shape, dtype=complex)
    inner = ~at_pi
    if inner.any():
        x = -np.cos(th[inner]) / np.sin(th[inner])
        out[inner] = sign * (1 + x * x) ** ((d + 1) / 2) * phi(x)
    if at_pi.any():
        report = tail or asymptotic_check(phi, min(d + 4, _FIT_EXPONENTS.size - 1))
        out[at_pi] = sign * report.coefficients[d + 1]
    return out[()] if out.ndim == 0 else out


def induced_equivariant(phi: InducedFunction, y: float, a: float, theta: float) -> complex:
    """F_phi(n(y) s(a) r(theta)) = a^{d+1} F_phi(r(theta))."""
    return a ** (phi.weight + 1) * complex(induced_from_phi(phi, theta))


def _decay_screen(g, power_needed: float, what: str):
    xs = np.array([1e3, 1e4])
    for side in (1.0, -1.0):
        v = np.abs(np.asarray(g(side * xs), dtype=complex))
        if v[1] == 0:
            continue
        if v[0] == 0 or math.log(v[0] / v[1]) / math.log(10) < power_needed:
            raise DivergenceError(f"{what}: integrand does not decay fast enough")


def induced_norm(phi: InducedFunction, tol: float = 1e-12) -> float:
    """(1/pi) int (1+x^2)^d |phi(x)|^2 dx."""
    d = phi.weight

    def integrand(x):
        x = np.asarray(x, dtype=float)
        return (1 + x * x) ** d * np.abs(phi(x)) ** 2

    probe = np.abs(integrand(np.array([-1e3, -1.0, 0.0, 1.0, 1e3])))
    if np.all(probe == 0):
        return 0.0
    _decay_screen(integrand, 1.05, "induced norm")
    return float(integrate_line(integrand, power=2, tol=tol).value.real / math.pi)


def induced_norm_on_circle(phi: InducedFunction, tol: float = 1e-12) -> float:
    """The same norm as (1/pi) int_0^pi |F_phi(r(theta))|^2 dtheta."""
    from .quadrature import integrate_interval

    d = phi.weight

    def integrand(th):
        x = -np.cos(th) / np.sin(th)
        return (1 + x * x) ** (d + 1) * np.abs(phi(x)) ** 2

    return float(integrate_interval(integrand, 0.0, math.pi, tol).value.real / math.pi)


def l_functional(phi: InducedFunction, lam, n: int, tol: float = 1e-9):
    """l_{lambda,n}(phi) = int t^n phi(t) e^{-i lambda t} dt (vectorised in lambda)."""
    d = phi.weight
    if not 0 <= n <= d - 1:
        raise DomainError(f"need 0 <= n <= d-1 = {d - 1}")
    lams = np.atleast_1d(np.asarray(lam, dtype=float))

    def weighted(t):
        return np.asarray(t, dtype=float) ** n * np.asarray(phi(t), dtype=complex)

    _decay_screen(weighted, 1.05, "l functional")

    def integrand(t, m):
        return weighted(t) * np.exp(-1j * lams[m] * t)

    res = integrate_line_family(integrand, lams.size, 1.0, np.abs(lams), tol, power=d + 1 - n,
                                budget=DEFAULT_BUDGET * lams.size)
    return res.values if np.ndim(lam) else complex(res.values[0])


# ------------------------------------------------------------------ asymptotics

# half-step exponents: 17 samples on [2^6, 2^14]
_FIT_EXPONENTS = np.arange(6, 14.25, 0.5)
_FIT_SCALE = 64.0


def asymptotic_check(phi, M: int, *, d: int | None = None, max_condition: float = 1e10,
                     ) -> AsymptoticReport:
    """Fit phi(x) ~ sum_{m<=M} a_m x^-m from samples at x = 2^k, k = 6, 6.5, ..., 14.

    Rows are weighted by x^{d+1} so every sample counts on the scale of
    a_{d+1}. The coefficients come from the positive tail; the residual is
    the largest weighted misfit over both tails using those coefficients,
    so a function whose two tails follow different expansions is flagged.
    """
    if d is None:
        d = getattr(phi, "weight", None)
    if d is None:
        raise DomainError("the weight d is needed to scale the fit")
    if M > d + 4:
        raise DomainError(f"M must be at most d+4 = {d + 4}")
    if M + 1 > _FIT_EXPONENTS.size:
        raise FitError("more coefficients than samples")
    x = 2.0 ** _FIT_EXPONENTS
    design = (_FIT_SCALE / x)[:, None] ** np.arange(M + 1)[None, :]
    weight = x ** (d + 1)
    weighted = design * weight[:, None]
    norms = np.linalg.norm(weighted, axis=0)
    weighted /= norms
    cond = float(np.linalg.cond(weighted))
    if not np.isfinite(cond) or cond > max_condition:
        raise FitError(f"asymptotic fit is ill-conditioned (cond {cond:.3g})")
    data_pos = np.asarray(phi(x), dtype=complex)
    data_neg = np.asarray(phi(-x), dtype=complex)
    scaled, *_ = np.linalg.lstsq(weighted, data_pos * weight, rcond=None)
    scaled /= norms
    alternating = (-1.0) ** np.arange(M + 1)
    residual = max(float(np.max(weight * np.abs(design @ scaled - data_pos))),
                   float(np.max(weight * np.abs(design @ (scaled * alternating) - data_neg))))
    coeffs = scaled * _FIT_SCALE ** np.arange(M + 1)
    return AsymptoticReport(tuple(complex(c) for c in coeffs), residual, cond)


__all__ = [
    "Provenance", "InducedFunction", "AsymptoticReport", "t_transform", "t_transform_quadrature",
    "t_image", "weyl_op", "fourier_values", "m_transform", "phi_zero", "phi_lowest",
    "phi_zero_fourier", "induced_from_phi", "induced_equivariant", "induced_norm",
    "induced_norm_on_circle", "l_functional", "asymptotic_check",
]
