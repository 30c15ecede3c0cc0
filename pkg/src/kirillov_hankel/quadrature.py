"""Adaptive Gauss-Kronrod integration over finite, half-line and full-line ranges.

Every routine works on a *family* of integrands sharing one vectorised
callable ``g(x, member)``: panels of all members are evaluated together,
which is what makes grid-wide Hankel and Fourier transforms affordable.
The single-integrand helpers are thin wrappers around the family versions.

Tails are handled according to the decay hint:

* exponential decay (``decay_rate``): truncate at
  ``X = (ln(1/tol) + 10) / decay_rate``, extended until the probed envelope
  says the dropped tail is below tolerance; the tail bound is added to the
  error estimate.
* algebraic decay (``power``): the non-oscillatory tail is mapped onto
  ``(0, 1]`` with ``x = A/u``; an oscillatory tail is summed half-period by
  half-period and accelerated with Wynn's epsilon algorithm.

Subdivision order is fixed, so results are bit-reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import QuadratureError

# 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG7 = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1:7:2] = _WG7[:3]
GAUSS_WEIGHTS[7] = _WG7[3]
GAUSS_WEIGHTS[9:15:2] = _WG7[:3][::-1]

DEFAULT_BUDGET = 2 ** 20
_EPS = np.finfo(float).eps

FamilyIntegrand = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if not self.error_estimate >= 0:
            raise ValueError("error_estimate must be nonnegative")
        if self.evaluations < 1:
            raise ValueError("evaluations must be positive")


@dataclass(frozen=True)
class FamilyResult:
    """Per-member values, error estimates and evaluation counts."""

    values: np.ndarray
    errors: np.ndarray
    evaluations: np.ndarray

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i) -> QuadratureResult:
        return QuadratureResult(complex(self.values[i]), float(self.errors[i]),
                                int(max(self.evaluations[i], 1)))


def _gk15(g: FamilyIntegrand, a: np.ndarray, b: np.ndarray, member: np.ndarray):
    half = 0.5 * (b - a)
    centre = 0.5 * (a + b)
    x = centre[:, None] + half[:, None] * NODES[None, :]
    m = np.repeat(member, 15)
    fx = np.asarray(g(x.ravel(), m), dtype=complex).reshape(x.shape)
    kron = half * (fx @ KRONROD_WEIGHTS)
    gauss = half * (fx @ GAUSS_WEIGHTS)
    absf = np.abs(fx)
    resabs = np.abs(half) * (absf @ KRONROD_WEIGHTS)
    mean = np.where(half != 0, kron / np.where(half != 0, 2 * half, 1), 0)
    resasc = np.abs(half) * (np.abs(fx - mean[:, None]) @ KRONROD_WEIGHTS)
    err = np.abs(kron - gauss)
    scaled = np.where(resasc > 0,
                      resasc * np.minimum(1.0, (200 * err / np.where(resasc > 0, resasc, 1)) ** 1.5),
                      err)
    floor = 50 * _EPS * resabs
    if not np.all(np.isfinite(kron)):
        raise QuadratureError("integrand returned non-finite values")
    return kron, np.maximum(scaled, floor), floor


def _bincount_complex(idx, weights, n):
    return (np.bincount(idx, weights=weights.real, minlength=n)
            + 1j * np.bincount(idx, weights=weights.imag, minlength=n))


def _adaptive(g, a, b, member, n, tol, rel_tol, budget):
    """Globally adaptive bisection on a family of panels.

    A member stops refining when its summed error estimate is below
    ``max(tol[m], rel_tol*|I[m]|)``; panels whose error is at the
    roundoff floor are never split.
    """
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    member = np.asarray(member, np.int64)
    evals = np.bincount(member, minlength=n) * 15
    if a.size == 0:
        return np.zeros(n, complex), np.zeros(n), evals
    val, err, floor = _gk15(g, a, b, member)
    total = int(evals.sum())
    while True:
        integral = _bincount_complex(member, val, n)
        error = np.bincount(member, weights=err, minlength=n)
        target = np.maximum(tol, rel_tol * np.abs(integral))
        need = error > target
        if not need.any():
            break
        count = np.bincount(member, minlength=n)
        width = np.abs(b - a)
        splittable = (width > 1e-14 * np.maximum(np.abs(a) + np.abs(b), 1e-300)) & (err > 1.0001 * floor)
        pick = need[member] & splittable & (err >= target[member] / np.maximum(count[member], 1))
        if not pick.any():
            # best effort at roundoff level; the error estimate stays honest
            break
        idx = np.nonzero(pick)[0]
        total += 30 * idx.size
        if total > budget:
            raise QuadratureError(
                f"panel budget of {budget} evaluations exhausted "
                f"(remaining error {error[need].max():.3g} > target)")
        mid = 0.5 * (a[idx] + b[idx])
        na = np.concatenate([a[idx], mid])
        nb = np.concatenate([mid, b[idx]])
        nm = np.concatenate([member[idx], member[idx]])
        nv, ne, nf = _gk15(g, na, nb, nm)
        evals += np.bincount(nm, minlength=n) * 15
        keep = ~pick
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        member = np.concatenate([member[keep], nm])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        floor = np.concatenate([floor[keep], nf])
    integral = _bincount_complex(member, val, n)
    error = np.bincount(member, weights=err, minlength=n)
    return integral, error, evals


def _partition(lo, hi, width):
    """Split each [lo_m, hi_m] into equal panels no wider than width_m."""
    counts = np.maximum(np.ceil((hi - lo) / width).astype(np.int64), 1)
    member = np.repeat(np.arange(lo.size), counts)
    start = np.cumsum(counts) - counts
    k = np.arange(member.size) - start[member]
    step = (hi - lo) / counts
    a = lo[member] + k * step[member]
    b = a + step[member]
    b = np.where(k == counts[member] - 1, hi[member], b)
    return a, b, member


def _broadcast(n, *args):
    return [np.broadcast_to(np.asarray(v, dtype=float), (n,)).copy() for v in args]


def integrate_interval_family(g: FamilyIntegrand, n: int, lower, upper, tol, *,
                              oscillation=0.0, rel_tol=0.0, max_width=None,
                              budget=DEFAULT_BUDGET) -> FamilyResult:
    """Integrate member ``m`` of ``g`` over ``[lower[m], upper[m]]``."""
    lower, upper, tol, oscillation = _broadcast(n, lower, upper, tol, oscillation)
    span = upper - lower
    width = span / 4
    osc = np.abs(oscillation)
    width = np.where(osc > 0, np.minimum(width, np.pi / (2 * np.where(osc > 0, osc, 1))), width)
    if max_width is not None:
        width = np.minimum(width, max_width)
    width = np.where(width > 0, width, 1.0)
    a, b, member = _partition(lower, upper, width)
    nonempty = span[member] > 0
    vals, errs, evals = _adaptive(g, a[nonempty], b[nonempty], member[nonempty],
                                  n, tol, rel_tol, budget)
    return FamilyResult(vals, errs, evals)


def _exponential_cutoff(g, n, decay_rate, tol, start):
    """Truncation points X_m and the tail bounds dropped beyond them."""
    cutoff = start + (np.log(1.0 / tol) + 10.0) / decay_rate
    probes = np.array([1.0, 1.1, 1.25, 1.5, 2.0])
    tail = np.full(n, np.inf)
    active = np.ones(n, bool)
    evals = 0
    for _ in range(60):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        x = (start[idx, None] + (cutoff[idx, None] - start[idx, None]) * probes[None, :])
        m = np.repeat(idx, probes.size)
        vals = np.abs(np.asarray(g(x.ravel(), m), complex)).reshape(x.shape)
        evals += vals.size
        # factor 2 covers polynomial prefactors growing across the tail
        bound = 2.0 * vals.max(axis=1) / decay_rate[idx]
        tail[idx] = bound
        ok = bound <= 0.1 * tol[idx]
        grow = idx[~ok]
        cutoff[grow] = start[grow] + 1.5 * (cutoff[grow] - start[grow])
        active[idx[ok]] = False
        if np.any(cutoff > 1e12):
            raise QuadratureError("integrand does not decay at the hinted rate")
    if active.any():
        raise QuadratureError("could not locate a truncation point")
    return cutoff, tail, evals


def wynn_epsilon_step(diagonal: list, new_sum: np.ndarray):
    """Extend the epsilon table by one partial sum.

    ``diagonal`` holds the previous ascending anti-diagonal (a list of
    arrays, one entry per column); the new anti-diagonal is returned along
    with the current best even-column estimate.
    """
    new = [new_sum]
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        for k in range(len(diagonal)):
            prev_km1 = diagonal[k - 1] if k >= 1 else 0.0
            diff = new[k] - diagonal[k]
            tiny = ~(np.abs(diff) >= 1e-300)
            safe = np.where(tiny, 1.0, diff)
            nxt = np.where(tiny, np.inf, prev_km1 + 1.0 / safe)
            new.append(nxt)
    best = new_sum.copy()
    for k in range(0, len(new), 2):
        cand = new[k]
        good = np.isfinite(cand)
        best = np.where(good, cand, best)
    return new, best


def _oscillatory_tail(g, n, start, oscillation, tol, budget, max_chunks=400):
    """Sum of half-period chunks from ``start`` to infinity, Wynn accelerated."""
    half_period = np.pi / np.abs(oscillation)
    partial = np.zeros(n, complex)
    estimates = []
    diagonal: list = []
    done = np.zeros(n, bool)
    result = np.zeros(n, complex)
    error = np.zeros(n)
    evals = np.zeros(n, np.int64)
    for k in range(max_chunks):
        idx = np.nonzero(~done)[0]
        if idx.size == 0:
            break
        lo = start[idx] + k * half_period[idx]
        hi = lo + half_period[idx]

        def chunk(x, m, idx=idx):
            return g(x, idx[m])

        res = integrate_interval_family(chunk, idx.size, lo, hi, 1e-2 * tol[idx],
                                        oscillation=oscillation[idx], budget=budget)
        evals[idx] += res.evaluations
        partial[idx] += res.values
        diagonal, best = wynn_epsilon_step(diagonal, partial.copy())
        estimates.append(best)
        if k >= 3:
            d1 = np.abs(estimates[-1] - estimates[-2])
            d2 = np.abs(estimates[-2] - estimates[-3])
            conv = (~done) & (d1 <= 0.5 * tol) & (d2 <= tol)
            result[conv] = estimates[-1][conv]
            error[conv] = np.maximum(d1[conv], d2[conv]) + 1e-2 * tol[conv]
            done |= conv
        if len(diagonal) > 40:
            diagonal = diagonal[:40]
    if not done.all():
        raise QuadratureError("oscillatory tail did not converge")
    return result, error, evals


def integrate_halfline_family(g: FamilyIntegrand, n: int, decay_rate=1.0, oscillation=0.0,
                              tol=1e-10, *, power=None, lower=0.0, scale=None,
                              rel_tol=0.0, budget=DEFAULT_BUDGET) -> FamilyResult:
    """Integrate each member of ``g`` over ``[lower, inf)``.

    With ``power=None`` the integrand is assumed to decay like
    ``exp(-decay_rate*x)``; otherwise like ``|x|**-power`` (power > 1), and
    ``scale`` sets where the finite part ends and the tail treatment begins.
    """
    decay_rate, oscillation, tol, lower = _broadcast(n, decay_rate, oscillation, tol, lower)
    if power is None:
        if np.any(decay_rate <= 0):
            raise ValueError("decay_rate must be positive")
        cutoff, tail, probe_evals = _exponential_cutoff(g, n, decay_rate, tol, lower)
        res = integrate_interval_family(g, n, lower, cutoff, 0.5 * tol, oscillation=oscillation,
                                        rel_tol=rel_tol, budget=budget)
        return FamilyResult(res.values, res.errors + tail, res.evaluations + probe_evals // max(n, 1))
    if power <= 1:
        raise ValueError("algebraic decay needs power > 1")
    split = lower + (8.0 if scale is None else scale)
    split = np.broadcast_to(split, (n,)).astype(float)
    head = integrate_interval_family(g, n, lower, split, 0.5 * tol, oscillation=oscillation,
                                     rel_tol=rel_tol, budget=budget)
    values = head.values.copy()
    errors = head.errors.copy()
    evals = head.evaluations.copy()
    osc = np.abs(oscillation) > 0
    if (~osc).any():
        idx = np.nonzero(~osc)[0]

        def mapped(u, m, idx=idx):
            # x = A/u sends [A, inf) onto (0, 1]
            A = split[idx[m]]
            return g(A / u, idx[m]) * (A / (u * u))

        tail = integrate_interval_family(mapped, idx.size, 0.0, 1.0, 0.5 * tol[idx],
                                         budget=budget)
        values[idx] += tail.values
        errors[idx] += tail.errors
        evals[idx] += tail.evaluations
    if osc.any():
        idx = np.nonzero(osc)[0]

        def sub(x, m, idx=idx):
            return g(x, idx[m])

        tv, te, tn = _oscillatory_tail(sub, idx.size, split[idx], oscillation[idx],
                                       0.5 * tol[idx], budget)
        values[idx] += tv
        errors[idx] += te
        evals[idx] += tn
    return FamilyResult(values, errors, evals)


def integrate_line_family(g: FamilyIntegrand, n: int, decay_rate=1.0, oscillation=0.0,
                          tol=1e-10, *, power=None, scale=None, rel_tol=0.0,
                          budget=DEFAULT_BUDGET) -> FamilyResult:
    """Integrate each member over the whole real line (both tails)."""
    decay_rate, oscillation, tol = _broadcast(n, decay_rate, oscillation, tol)

    def folded(x, m):
        # members n..2n-1 are the reflected integrands g(-x)
        sign = np.where(m >= n, -1.0, 1.0)
        return g(sign * x, m % n)

    res = integrate_halfline_family(folded, 2 * n, np.tile(decay_rate, 2),
                                    np.tile(oscillation, 2), np.tile(0.5 * tol, 2),
                                    power=power, scale=scale, rel_tol=rel_tol, budget=budget)
    return FamilyResult(res.values[:n] + res.values[n:], res.errors[:n] + res.errors[n:],
                        res.evaluations[:n] + res.evaluations[n:])


def _single(g: Callable[[np.ndarray], np.ndarray]) -> FamilyIntegrand:
    return lambda x, m: g(x)


def integrate_interval(integrand, a: float, b: float, tol: float = 1e-10, *,
                       oscillation: float = 0.0, rel_tol: float = 0.0,
                       budget: int = DEFAULT_BUDGET) -> QuadratureResult:
    if b < a:
        res = integrate_interval(integrand, b, a, tol, oscillation=oscillation,
                                 rel_tol=rel_tol, budget=budget)
        return QuadratureResult(-res.value, res.error_estimate, res.evaluations)
    return integrate_interval_family(_single(integrand), 1, a, b, tol, oscillation=oscillation,
                                     rel_tol=rel_tol, budget=budget)[0]


def integrate_halfline(integrand, decay_rate: float = 1.0, oscillation: float = 0.0,
                       tol: float = 1e-10, *, power: float | None = None,
                       scale: float | None = None, rel_tol: float = 0.0,
                       budget: int = DEFAULT_BUDGET) -> QuadratureResult:
    """Integrate a vectorised ``integrand`` over ``(0, inf)``.

    ``decay_rate`` and ``oscillation`` are hints: the envelope
    ``exp(-decay_rate*x)`` (or ``|x|**-power``) and the frequency of any
    ``exp(i*oscillation*x)`` factor.
    """
    return integrate_halfline_family(_single(integrand), 1, decay_rate, oscillation, tol,
                                     power=power, scale=scale, rel_tol=rel_tol, budget=budget)[0]


def integrate_line(integrand, decay_rate: float = 1.0, oscillation: float = 0.0,
                   tol: float = 1e-10, *, power: float | None = None,
                   scale: float | None = None, rel_tol: float = 0.0,
                   budget: int = DEFAULT_BUDGET) -> QuadratureResult:
    """Integrate a vectorised ``integrand`` over the whole real line."""
    return integrate_line_family(_single(integrand), 1, decay_rate, oscillation, tol,
                                 power=power, scale=scale, rel_tol=rel_tol, budget=budget)[0]


def gauss_kronrod_panel(integrand, a: float, b: float):
    """(Kronrod value, Gauss value) of one 15-point panel; handy for checks."""
    half, centre = 0.5 * (b - a), 0.5 * (a + b)
    fx = np.asarray(integrand(centre + half * NODES), complex)
    return complex(half * fx @ KRONROD_WEIGHTS), complex(half * fx @ GAUSS_WEIGHTS)


__all__ = [
    "QuadratureResult", "FamilyResult", "integrate_interval", "integrate_halfline",
    "integrate_line", "integrate_interval_family", "integrate_halfline_family",
    "integrate_line_family", "wynn_epsilon_step", "gauss_kronrod_panel", "NODES",
    "KRONROD_WEIGHTS", "GAUSS_WEIGHTS", "DEFAULT_BUDGET",
]
