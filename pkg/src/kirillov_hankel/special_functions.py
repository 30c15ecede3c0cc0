"""Gamma, Bessel J of complex order, Bessel K and generalised Laguerre polynomials.

All routines accept scalars or numpy arrays and are pure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BesselOverflowError, DomainError, PoleError

# Stirling series coefficients B_2k / (2k (2k-1)), k = 1..8
_STIRLING = np.array([
    1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188,
    -691 / 360360, 1 / 156, -3617 / 122400,
])
_STIRLING_MIN = 15.0
_SQRT_2PI = math.sqrt(2 * math.pi)


@dataclass(frozen=True)
class ComplexOrder:
    """Order of a Hankel transform; the real part must exceed -1."""

    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not (np.isfinite(v.real) and np.isfinite(v.imag)):
            raise DomainError(f"order must be finite, got {v}")
        if v.real <= -1:
            raise DomainError(f"order needs Re > -1, got {v}")
        object.__setattr__(self, "value", v)

    @property
    def is_real(self) -> bool:
        return self.value.imag == 0

    @property
    def half_weight(self) -> complex:
        """The exponent (nu+1)/2 carried by every profile of this order."""
        return (self.value + 1) / 2

    def __complex__(self):
        return self.value

    def __str__(self):
        v = self.value
        if v.imag == 0:
            return repr(v.real)
        return f"{v.real!r}{v.imag:+r}i".replace("+-", "-")


def as_order(nu) -> ComplexOrder:
    return nu if isinstance(nu, ComplexOrder) else ComplexOrder(complex(nu))


def _scalar_or_array(value, like):
    return value[()] if np.ndim(like) == 0 else value


def log_gamma_stirling(z):
    """Stirling series for log Gamma; accurate once |z| >= 15."""
    z = np.asarray(z, dtype=complex)
    inv = 1 / z
    inv2 = inv * inv
    corr = np.zeros(z.shape, dtype=complex)
    for c in _STIRLING[::-1]:
        corr = corr * inv2 + c
    return (z - 0.5) * np.log(z) - z + 0.5 * math.log(2 * math.pi) + corr * inv


def gamma(z):
    """Gamma function for complex arguments.

    Stirling's series after shifting the argument to |z| >= 15 with the
    recurrence, and reflection for Re z < 0.5.
    """
    z = np.asarray(z, dtype=complex)
    poles = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(poles):
        raise PoleError(f"Gamma has a pole at {z[poles].ravel()[0].real:g}")
    reflect = z.real < 0.5
    w = np.where(reflect, 1 - z, z)
    shift = np.where(np.abs(w) >= _STIRLING_MIN, 0,
                     np.ceil(_STIRLING_MIN - w.real)).astype(int)
    prod = np.ones(w.shape, dtype=complex)
    for k in range(int(shift.max(initial=0))):
        prod = prod * np.where(k < shift, w + k, 1)
    val = np.exp(log_gamma_stirling(w + shift)) / prod
    if np.all(z.imag == 0):
        val = val.real + 0j
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(reflect, np.pi / (_sin_pi(z) * val), val)
    return _scalar_or_array(out, z)


def _sin_pi(z):
    # reduce by the nearest integer first; z - n is exact
    n = np.round(z.real)
    return np.sin(np.pi * (z - n)) * np.where(n % 2 == 0, 1.0, -1.0)


# ---------------------------------------------------------------- Bessel J

SERIES_MAX = 6.0
ASYMPTOTIC_FLOOR = 25.0
_ASYMPTOTIC_TERM_TOL = 1e-17
_MAX_ASYMPTOTIC_TERMS = 80
_ASYMPTOTIC_PEAK = 10.0


def _nu_key(nu) -> complex:
    return complex(nu.value if isinstance(nu, ComplexOrder) else nu)


@lru_cache(maxsize=256)
def _asymptotic_plan(nu: complex) -> tuple[float, int]:
    """Smallest x where the asymptotic series reaches 1e-17, and the term count.

    Terms may grow at first when |nu| is large; the peak is kept below
    ``_ASYMPTOTIC_PEAK`` so cancellation costs at most a couple of digits.
    """
    four_nu2 = 4 * nu * nu
    turning = math.sqrt(abs(four_nu2)) / 2 + 1
    x = ASYMPTOTIC_FLOOR
    while True:
        term = peak = 1.0
        for k in range(_MAX_ASYMPTOTIC_TERMS):
            ratio = abs(four_nu2 - (2 * k + 1) ** 2) / ((k + 1) * 8 * x)
            if ratio == 0:
                return x, k + 1
            if ratio >= 1 and k > turning:
                break
            term *= ratio
            peak = max(peak, term)
            if peak > _ASYMPTOTIC_PEAK:
                break
            if term < _ASYMPTOTIC_TERM_TOL:
                return x, k + 2
        x *= 1.05


def regime_thresholds(nu) -> tuple[float, float]:
    """(end of the power-series regime, start of the asymptotic regime)."""
    return SERIES_MAX, _asymptotic_plan(_nu_key(nu))[0]


def _work_dtype(nu: complex):
    return float if nu.imag == 0 else complex


def bessel_j_series(nu, x):
    """Defining power series; accurate for moderate x."""
    nu = _nu_key(nu)
    dt = _work_dtype(nu)
    nuv = nu.real if dt is float else nu
    x = np.asarray(x, dtype=float)
    half = x / 2
    with np.errstate(divide="ignore", invalid="ignore"):
        lead = np.power(half.astype(dt), nuv) / (gamma(nu + 1).real if dt is float else gamma(nu + 1))
    term = np.asarray(lead, dtype=dt)
    total = term.copy()
    q = -half * half
    for k in range(1, 201):
        term = term * q / (k * (k + nuv))
        total = total + term
        if np.all(np.abs(term) <= 1e-18 * np.abs(total)):
            break
    return total


def bessel_j_miller(nu, x):
    """Miller backward recurrence normalised by the Neumann sum for (x/2)**beta."""
    nu = _nu_key(nu)
    dt = _work_dtype(nu)
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape, dtype=dt)
    flat_x = x.ravel()
    flat_out = out.ravel()
    shift = 0 if nu.real < 1 else int(math.floor(nu.real))
    beta = nu - shift
    betav = beta.real if dt is float else beta
    # bin by x so that the recurrence depth matches the argument
    keys = np.floor(4 * np.log2(np.maximum(flat_x, 1e-300))).astype(np.int64)
    for key in np.unique(keys):
        sel = np.nonzero(keys == key)[0]
        xs = flat_x[sel]
        depth = shift + int(1.3 * xs.max() + 12 * xs.max() ** (1 / 3)) + 40
        depth += depth % 2
        weights = np.empty(depth // 2 + 1, dtype=dt)
        weights[0] = 1.0
        e = 1.0
        for k in range(1, depth // 2 + 1):
            weights[k] = (betav + 2 * k) * e
            e = e * (betav + k) / (k + 1)
        upper = np.zeros(xs.size, dtype=dt)
        cur = np.full(xs.size, 1e-30, dtype=dt)
        total = np.zeros(xs.size, dtype=dt)
        target = np.zeros(xs.size, dtype=dt)
        for j in range(depth, -1, -1):
            if j == shift:
                target = cur.copy()
            if j % 2 == 0:
                total = total + weights[j // 2] * cur
            if j == 0:
                break
            nxt = (2 * (betav + j) / xs) * cur - upper
            upper, cur = cur, nxt
            big = np.abs(cur) > 1e200
            if big.any():
                scale = np.where(big, 1e-200, 1.0)
                cur, upper, total, target = cur * scale, upper * scale, total * scale, target * scale
        g1 = gamma(beta + 1)
        norm = np.power((xs / 2).astype(dt), betav) / (g1.real if dt is float else g1)
        flat_out[sel] = target * norm / total
    return flat_out.reshape(x.shape)


def bessel_j_asymptotic(nu, x, terms: int | None = None):
    """Hankel's large-argument expansion."""
    nu = _nu_key(nu)
    dt = _work_dtype(nu)
    nuv = nu.real if dt is float else nu
    if terms is None:
        terms = _asymptotic_plan(nu)[1]
    x = np.asarray(x, dtype=float)
    four_nu2 = 4 * nuv * nuv
    p = np.ones(x.shape, dtype=dt)
    q = np.zeros(x.shape, dtype=dt)
    term = np.ones(x.shape, dtype=dt)
    for k in range(1, terms + 1):
        term = term * (four_nu2 - (2 * k - 1) ** 2) / (k * 8 * x)
        sign = -1 if (k // 2) % 2 else 1
        if k % 2:
            q = q + sign * term
        else:
            p = p + sign * term
    phase = nuv * np.pi / 2 + np.pi / 4
    cos_chi = np.cos(x) * np.cos(phase) + np.sin(x) * np.sin(phase)
    sin_chi = np.sin(x) * np.cos(phase) - np.cos(x) * np.sin(phase)
    return np.sqrt(2 / (np.pi * x)) * (p * cos_chi - q * sin_chi)


def bessel_j(nu, x):
    """J-Bessel function J_nu(x) for x >= 0 and Re nu > -1.

    Three regimes: the power series for x <= 6, Miller's backward
    recurrence in the middle and Hankel's asymptotic expansion once its
    terms reach 1e-17 before diverging. For real ``nu`` the computation is
    carried out in real arithmetic, so the imaginary part is exactly zero.
    """
    order = as_order(nu)
    nu = order.value
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0) or np.any(np.isnan(x_arr)):
        raise DomainError("bessel_j needs x >= 0")
    out = np.empty(x_arr.shape, dtype=_work_dtype(nu))
    zero = x_arr == 0
    if zero.any():
        if nu == 0:
            out[zero] = 1.0
        elif nu.real > 0:
            out[zero] = 0.0
        else:
            raise DomainError(f"J_nu(0) is undefined for Re nu <= 0, nu = {nu}")
    series_max, asym_min = regime_thresholds(nu)
    small = ~zero & (x_arr <= series_max)
    large = x_arr >= asym_min
    middle = ~zero & ~small & ~large
    # overflow surfaces as a non-finite result and is reported below
    with np.errstate(over="ignore", invalid="ignore"):
        if small.any():
            out[small] = bessel_j_series(nu, x_arr[small])
        if middle.any():
            out[middle] = bessel_j_miller(nu, x_arr[middle])
        if large.any():
            out[large] = bessel_j_asymptotic(nu, x_arr[large])
    if not np.all(np.isfinite(out)):
        raise BesselOverflowError(f"J_{nu} overflowed")
    return _scalar_or_array(out.astype(complex), x_arr)


def bessel_j_array(nu, x) -> np.ndarray:
    """Like :func:`bessel_j` but keeps real dtype for real orders (hot path)."""
    nu = _nu_key(nu)
    x = np.asarray(x, dtype=float)
    series_max, asym_min = regime_thresholds(nu)
    out = np.empty(x.shape, dtype=_work_dtype(nu))
    small = x <= series_max
    large = x >= asym_min
    middle = ~small & ~large
    if small.any():
        out[small] = bessel_j_series(nu, x[small])
    if middle.any():
        out[middle] = bessel_j_miller(nu, x[middle])
    if large.any():
        out[large] = bessel_j_asymptotic(nu, x[large])
    if not np.all(np.isfinite(out)):
        raise BesselOverflowError(f"J_{nu} overflowed")
    return out


# ---------------------------------------------------------------- Bessel K

def _half_integer_k(n: int, y):
    s = np.zeros_like(y)
    for k in range(n + 1):
        s = s + math.factorial(n + k) / (math.factorial(k) * math.factorial(n - k)) / (2 * y) ** k
    return np.sqrt(np.pi / (2 * y)) * np.exp(-y) * s


def bessel_k(order: float, y):
    """Modified Bessel function K_order(y) for real order >= 0 and y > 0."""
    from .quadrature import integrate_interval_family

    order = abs(float(order))
    y_arr = np.asarray(y, dtype=float)
    if np.any(~(y_arr > 0)):
        raise DomainError("bessel_k needs y > 0")
    twice = 2 * order
    if twice == round(twice) and round(twice) % 2 == 1:
        out = _half_integer_k(int(round(twice)) // 2, y_arr)
        return _scalar_or_array(np.asarray(out), y_arr)
    flat = y_arr.ravel()
    upper = np.empty(flat.size)
    for i, yi in enumerate(flat):
        t = 1.0
        for _ in range(60):
            t = math.acosh(1 + (45 + order * t) / yi)
        upper[i] = t

    def integrand(t, m):
        ym = flat[m]
        return np.exp(-ym * (np.cosh(t) - 1)) * np.cosh(order * t)

    res = integrate_interval_family(integrand, flat.size, 0.0, upper, 1e-300, rel_tol=1e-14)
    out = (res.values.real * np.exp(-flat)).reshape(y_arr.shape)
    return _scalar_or_array(out, y_arr)


# ---------------------------------------------------------------- Laguerre

def laguerre(n: int, d, x):
    """Generalised Laguerre polynomial L_n^d(x) by the three-term recurrence."""
    if n < 0 or int(n) != n:
        raise DomainError("laguerre needs a nonnegative integer degree")
    x = np.asarray(x, dtype=float)
    prev = np.zeros(x.shape)
    cur = np.ones(x.shape)
    for k in range(int(n)):
        prev, cur = cur, ((2 * k + 1 + d - x) * cur - (k + d) * prev) / (k + 1)
    return _scalar_or_array(cur, x)


def laguerre_coefficients(n: int, d: int) -> np.ndarray:
    """Monomial coefficients c_k of L_n^d(x) = sum c_k x**k."""
    return np.array([(-1) ** k * math.comb(n + d, n - k) / math.factorial(k)
                     for k in range(n + 1)])


__all__ = [
    "ComplexOrder", "as_order", "gamma", "bessel_j", "bessel_j_array", "bessel_j_series",
    "bessel_j_miller", "bessel_j_asymptotic", "regime_thresholds", "bessel_k",
    "laguerre", "laguerre_coefficients", "SERIES_MAX",
]
