"""Verification suites shared by the ``verify`` command and the acceptance tests.

Each suite compares two independent computations of the same quantity and
returns a :class:`SuiteReport`. A suite may bundle several checks with
their own tolerances; it passes when every check does.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .corpus import corpus, random_profile
from .function_model import DEFAULT_GRID, Atom, Profile, Side, euler_derivative, make_grid
from .hankel import bilinear_product, hankel_profile, hankel_values, inner_product
from .intertwiners import (asymptotic_check, l_functional, m_transform, phi_lowest, t_image,
                           t_transform, t_transform_quadrature, weyl_op)
from .kfinite_basis import basis_vector, gram_deviation, k_eigen_check
from .representation import (GL2Element, GroupElement, Character, CharacterPair, Generator,
                             KirillovPair, H, X, Y, act_induced, act_kirillov, act_lie, gl2_act,
                             gl2_central, gl2_weyl_quadrature, induced_action, random_sl2)
from .special_functions import (as_order, bessel_j, bessel_j_asymptotic, bessel_j_miller,
                                bessel_j_series, laguerre, regime_thresholds)
from .quadrature import integrate_halfline


@dataclass
class Check:
    name: str
    max_error: float
    tolerance: float
    cases: int
    worst_case: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tolerance)


@dataclass
class SuiteReport:
    suite: str
    cases: int
    checks: list[Check]

    @property
    def max_error(self) -> float:
        return max(c.max_error for c in self.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "cases": self.cases,
            "max_error": self.max_error,
            "pass": self.passed,
            "checks": [dict(asdict(c), passed=c.passed) for c in self.checks],
        }


class _Tracker:
    """Running maximum of an error together with the case that produced it."""

    def __init__(self, name: str, tolerance: float):
        self.name, self.tolerance = name, tolerance
        self.worst, self.case, self.count = 0.0, {}, 0

    def add(self, error: float, **case):
        self.count += 1
        error = float(error)
        # a NaN error is kept: it must fail the check
        if not math.isnan(self.worst) and (math.isnan(error) or error > self.worst):
            self.worst, self.case = error, case

    def check(self) -> Check:
        return Check(self.name, self.worst, self.tolerance, self.count,
                     {k: _jsonable(v) for k, v in self.case.items()})


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (Profile, GroupElement, Generator)):
        return str(v)
    return v


def _sup(v) -> float:
    return float(np.max(np.abs(v)))


def _grid_subset(lo: float, hi: float, stride: int = 1) -> np.ndarray:
    g = make_grid(DEFAULT_GRID)
    return g[(g >= lo) & (g <= hi)][::stride]


# ------------------------------------------------------------------ Hankel suites

INVERSION_ORDERS = (-0.5, 0, 0.7 + 0.3j, 1, 2, 3)


def inversion(nu, seed: int = 0, tol: float = 1e-8, size: int = 10) -> SuiteReport:
    """H(H f) = f: closed form twice on the default grid, and quadrature applied to H f."""
    grid = make_grid(DEFAULT_GRID)
    quad_grid = grid[::8]
    closed = _Tracker("closed-form H o H", tol)
    quad = _Tracker("quadrature H applied to closed-form H f", tol)
    for i, f in enumerate(corpus(nu, size, seed, complex_rate=True)):
        ref = f.local(grid)
        scale = _sup(ref)
        hf = hankel_profile(f)
        closed.add(_sup(hankel_profile(hf).local(grid) - ref) / scale, index=i, profile=f)
        values, _ = hankel_values(hf, quad_grid, tol=1e-12)
        quad.add(_sup(values - f.local(quad_grid)) / scale, index=i, profile=f)
    return SuiteReport("inversion", size, [closed.check(), quad.check()])


def weber(nu, tol: float = 1e-9, rates=(1.0, 2.0, 3.5)) -> SuiteReport:
    """Quadrature H of x^{(nu+1)/2} e^{-a x} against a^{-(nu+1)} y^{(nu+1)/2} e^{-y/a}."""
    order = as_order(nu)
    grid = make_grid(DEFAULT_GRID)
    s = order.half_weight
    track = _Tracker("weber oracle (sup-relative)", tol)
    for a in rates:
        f = Profile.single(order, [1.0], a)
        values, _ = hankel_values(f, grid, tol=1e-12)
        ref = a ** (-(order.value + 1)) * np.exp(s * np.log(grid)) * np.exp(-grid / a)
        track.add(_sup(values - ref) / _sup(ref), rate=a)
    return SuiteReport("weber", len(rates), [track.check()])


DIAGRAM_POINTS = (-4.0, -1.0, -0.25, 0.25, 1.0, 4.0)


def diagram(nu, seed: int = 0, tol: float = 1e-7, size: int = 10) -> SuiteReport:
    """T(H f)(z) = W(T f)(z), with T(H f) both in closed form and by quadrature."""
    order = as_order(nu)
    z = np.array(DIAGRAM_POINTS)
    closed = _Tracker("closed-form T(Hf) vs W(Tf)", tol)
    quad = _Tracker("quadrature T(Hf) vs W(Tf)", tol)
    for i, f in enumerate(corpus(order, size, seed, complex_rate=True)):
        hf = hankel_profile(f)
        rhs = weyl_op(lambda x: t_transform(f, x), order, z)
        closed.add(_sup(t_transform(hf, z) - rhs), index=i, profile=f)
        lhs_q = t_transform_quadrature(hf, z, tol=1e-12)
        quad.add(_sup(lhs_q - rhs), index=i, profile=f)
    return SuiteReport("diagram", size, [closed.check(), quad.check()])


def isometry(nu, seed: int = 0, tol: float = 1e-8, pairs: int = 20) -> SuiteReport:
    """<Hf, Hg> = <f, g> for real nu; the bilinear form otherwise."""
    order = as_order(nu)
    rng = np.random.default_rng(seed)
    if order.is_real:
        pairing, name = inner_product, "inner product"
    else:
        pairing, name = bilinear_product, "bilinear pairing"
    track = _Tracker(f"{name} preserved", tol)
    for i in range(pairs):
        f = random_profile(rng, order, real=True)
        g = random_profile(rng, order, real=True)
        before = pairing(f, g)
        after = pairing(hankel_profile(f), hankel_profile(g))
        track.add(abs(after - before), index=i, f=f, g=g)
    return SuiteReport("isometry", pairs, [track.check()])


def derivative(nu, seed: int = 0, tol: float = 1e-6, size: int = 5) -> SuiteReport:
    """H(Df) by quadrature against -D(H f) by central differences of quadrature values."""
    order = as_order(nu)
    ys = _grid_subset(0.1, 10.0, 4)
    h = 1e-5
    track = _Tracker("H(Df) = -D(Hf)", tol)
    for i, f in enumerate(corpus(order, size, seed)):
        left, _ = hankel_values(euler_derivative(f), ys, tol=1e-13)
        up, _ = hankel_values(f, ys * (1 + h), tol=1e-13)
        down, _ = hankel_values(f, ys * (1 - h), tol=1e-13)
        right = -(up - down) / (2 * h)
        track.add(_sup(left - right), index=i, profile=f)
    return SuiteReport("derivative", size, [track.check()])


# ------------------------------------------------------------------ representation suites

def _kirillov_profile(d: int, side: Side = Side.POSITIVE) -> Profile:
    return Profile(d, (Atom((0.5, 1.0), 1.5), Atom((1.0 + 0.5j,), 1.0)), side)


def grouplaw(d: int, seed: int = 0, pairs: int = 20, induced_tol: float = 1e-9,
             kirillov_tol: float = 1e-6, weyl_tol: float = 1e-8) -> SuiteReport:
    """Group law in both models and w^2 = (-1)^{d+1}."""
    rng = np.random.default_rng(seed)
    grid = make_grid(DEFAULT_GRID)
    phi = t_image(_kirillov_profile(d), None, d=d)
    ind = _Tracker("induced group law", induced_tol)
    kir = _Tracker("Kirillov group law (relative)", kirillov_tol)
    wsq = _Tracker("w^2 = (-1)^(d+1)", weyl_tol)
    for i in range(pairs):
        g1, g2 = random_sl2(rng), random_sl2(rng)
        g = g1 @ g2
        for _ in range(3):
            x = float(rng.uniform(-5, 5))
            inner = g2.r * x + g2.p
            outer = g.r * x + g.p
            if min(abs(inner), abs(outer)) < 1e-3:
                continue
            lhs = act_induced(g, phi, x)
            rhs = act_induced(g1, induced_action(g2, phi), x)
            ind.add(abs(lhs - rhs) / max(1.0, abs(rhs)), case=i, x=x)
        for side in Side:
            f = _kirillov_profile(d, side)
            lhs = act_kirillov(g, f).local(grid)
            rhs = act_kirillov(g1, act_kirillov(g2, f)).local(grid)
            kir.add(_sup(lhs - rhs) / _sup(rhs), case=i, side=side.value,
                    g1=str(g1.as_array().tolist()), g2=str(g2.as_array().tolist()))
    for side in Side:
        f = _kirillov_profile(d, side)
        twice = act_kirillov([Generator("w"), Generator("w")], f)
        wsq.add(_sup(twice.local(grid) - (-1) ** (d + 1) * f.local(grid)), side=side.value)
    return SuiteReport("grouplaw", pairs, [ind.check(), kir.check(), wsq.check()])


INTERTWINING_ELEMENTS = (("n(1)", GroupElement.n(1.0)), ("s(2)", GroupElement.s(2.0)),
                         ("w", GroupElement.w()))


def intertwining(d: int, tol: float = 1e-6) -> SuiteReport:
    """M_d(g . T_d f) = R_d(g) f for g in {n(1), s(2), w}, on both half-lines."""
    ys = _grid_subset(0.01, 20.0, 8)
    track = _Tracker("M_d(g T_d f) = R(g) f", tol)
    for side in Side:
        f = _kirillov_profile(d, side)
        phi = t_image(f if side is Side.POSITIVE else None,
                      f if side is Side.NEGATIVE else None, d=d)
        for name, g in INTERTWINING_ELEMENTS:
            lhs = m_transform(induced_action(g, phi), side.sign * ys, d, tol=1e-10)
            image = act_kirillov(g, f)
            rhs = image.local(ys) if image.side is side else np.zeros(ys.size)
            track.add(_sup(lhs - rhs), side=side.value, element=name)
    return SuiteReport("intertwining", 2 * len(INTERTWINING_ELEMENTS), [track.check()])


def _one_parameter(el) -> Callable[[float], list[Generator]]:
    if el is X:
        return lambda t: [Generator("n", t)]
    if el is H:
        return lambda t: [Generator("s", math.exp(t))]
    # exp(tY) = [[1,0],[t,1]] = w n(-t) w^{-1}
    return lambda t: [Generator("w"), Generator("n", -t)] + [Generator("w")] * 3


def lie(d: int, seed: int = 0, fd_tol: float = 1e-5, bracket_tol: float = 1e-8,
        size: int = 10) -> SuiteReport:
    """Finite-difference exponentiation and the bracket relations."""
    grid = _grid_subset(1e-3, 20.0, 4)
    h = 1e-4
    fd = _Tracker("central differences of exp(tZ)", fd_tol)
    br = _Tracker("[X,Y] = H, [H,X] = 2X, [H,Y] = -2Y", bracket_tol)
    rng = np.random.default_rng(seed)
    for i in range(size):
        side = Side.POSITIVE if i % 2 == 0 else Side.NEGATIVE
        f = random_profile(rng, d, side=side)
        # unit norm, so the absolute tolerances mean the same thing for every draw
        f = f.scaled(1 / math.sqrt(inner_product(f, f).real))
        for name, el in (("X", X), ("H", H), ("Y", Y)):
            word = _one_parameter(el)
            diff = (act_kirillov(word(h), f).local(grid) - act_kirillov(word(-h), f).local(grid)) / (2 * h)
            fd.add(_sup(diff - act_lie(el, f).local(grid)), index=i, element=name, side=side.value)
        x_f, y_f, h_f = act_lie(X, f), act_lie(Y, f), act_lie(H, f)
        rels = [
            act_lie(X, y_f) - act_lie(Y, x_f) - h_f,
            act_lie(H, x_f) - act_lie(X, h_f) - x_f.scaled(2),
            act_lie(H, y_f) - act_lie(Y, h_f) + y_f.scaled(2),
        ]
        scale = max(1.0, _sup(h_f.local(grid)))
        br.add(max(_sup(r.local(grid)) for r in rels) / scale, index=i, side=side.value)
    return SuiteReport("lie", size, [fd.check(), br.check()])


def basis(d: int, N: int = 10, gram_tol: float = 1e-8, fixed_tol: float = 1e-9,
          closed_tol: float = 1e-7, eigen_tol: float = 1e-6) -> SuiteReport:
    """Gram matrix, Hankel fixed point, the M_d closed form and the K-eigenvalue ladder."""
    grid = make_grid(DEFAULT_GRID)
    gram = _Tracker("Gram = I", gram_tol)
    gram.add(gram_deviation(N, d), N=N, d=d)
    fixed = _Tracker("quadrature H_d e_0 = e_0", fixed_tol)
    e0 = basis_vector(0, d).profile
    values, _ = hankel_values(e0, grid, tol=1e-13)
    fixed.add(_sup(values - e0.local(grid)), d=d)
    closed = _Tracker("M_d(phi_F0) = sqrt(2 pi)/d! y^{(d+1)/2} e^{-y}", closed_tol)
    ys = np.array([0.25, 0.5, 1.0, 2.0, 4.0])
    got = m_transform(phi_lowest(d), ys, d)
    ref = math.sqrt(2 * math.pi) / math.factorial(d) * ys ** ((d + 1) / 2) * np.exp(-ys)
    closed.add(_sup(got - ref), d=d)
    eig = _Tracker("i(X-Y) e_n = lambda_n e_n, lambda_{n+1} - lambda_n = -2", eigen_tol)
    results = [k_eigen_check(n, d) for n in range(min(N, 5) + 1)]
    for r in results:
        eig.add(r.residual, n=r.n, eigenvalue=r.eigenvalue)
    for a, b in zip(results, results[1:]):
        eig.add(abs((b.eigenvalue - a.eigenvalue) + 2), n=b.n, step=b.eigenvalue - a.eigenvalue)
    return SuiteReport("basis", N + 1, [gram.check(), fixed.check(), closed.check(), eig.check()])


def membership(d: int, seed: int = 0, coeff_tol: float = 1e-5, l_tol: float = 1e-7,
               witness_min: float = 1e-3, size: int = 3) -> SuiteReport:
    """T_d images lie in I_d^+: vanishing low asymptotic coefficients and l_{lambda,n}."""
    rng = np.random.default_rng(seed)
    coeffs = _Tracker("|a_m| for m <= d", coeff_tol)
    lvals = _Tracker("|l_{lambda,n}| for lambda <= 0", l_tol)
    wit = _Tracker("1e-3 / |l_{1,0}| on the witness", 1.0)
    lams = np.array([0.0, -0.5, -2.0])
    for i in range(size):
        f = random_profile(rng, d)
        phi = t_image(f, None, d=d)
        report = asymptotic_check(phi, d + 3)
        coeffs.add(max(abs(a) for a in report.coefficients[: d + 1]), index=i, profile=f)
        for n in range(d):
            lvals.add(np.max(np.abs(l_functional(phi, lams, n))), index=i, n=n)
    witness = t_image(Profile.single(d, [1.0], 1.0), None, d=d)
    value = abs(l_functional(witness, 1.0, 0))
    wit.add(witness_min / value, l_value=value)
    return SuiteReport("membership", size, [coeffs.check(), lvals.check(), wit.check()])


def gl2(d: int, seed: int = 0, weyl_tol: float = 1e-7, central_tol: float = 1e-15) -> SuiteReport:
    """The w-action through the j_d integral versus the Hankel path; the central character."""
    m2 = 0
    chars = CharacterPair(Character(0.25 + d, (d + 1 + m2) % 2), Character(0.25, m2))
    rng = np.random.default_rng(seed)
    ys = np.array([-4.0, -1.0, -0.3, 0.3, 1.0, 4.0])
    weyl = _Tracker("w via j_d quadrature vs Hankel path", weyl_tol)
    central = _Tracker("centre acts by omega(b) (relative)", central_tol)
    w = GL2Element(0.0, -1.0, 1.0, 0.0, chars)
    for i in range(3):
        for support in Side:
            f = random_profile(rng, d, side=support, real=True)
            pair = KirillovPair.from_profile(f)
            quad = gl2_weyl_quadrature(pair, chars, ys)
            exact = gl2_act(w, pair)
            weyl.add(_sup(quad - exact(ys)), index=i, support=support.value)
            for b in (-1.5, 0.5, 3.0):
                got = gl2_act(GL2Element(b, 0.0, 0.0, b, chars), pair)
                want = gl2_central(b, pair, chars)
                scale = _sup(want(ys))
                central.add(_sup(got(ys) - want(ys)) / scale, index=i, b=b)
    return SuiteReport("gl2", 6, [weyl.check(), central.check()])


# ------------------------------------------------------------------ special functions

def special(seed: int = 0) -> SuiteReport:
    """Bessel recurrence, regime crossover, the kernel derivative relation, Laguerre orthogonality."""
    rec = _Tracker("J_{v-1} + J_{v+1} = (2v/x) J_v (relative)", 1e-9)
    xs = np.linspace(0.5, 50, 100)
    for nu in (0.5, 1.0, 2.3, 1 + 0.5j):
        lhs = bessel_j(nu - 1, xs) + bessel_j(nu + 1, xs)
        rhs = 2 * nu / xs * bessel_j(nu, xs)
        rec.add(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(rhs), 1e-3)), nu=complex(nu))
    cross = _Tracker("regime crossover (relative)", 1e-9)
    for nu in (0.0, 1.0, 2.0, 5.0):
        series_max, asym_min = regime_thresholds(nu)
        near = np.array([0.99, 1.0, 1.01])
        a = bessel_j_series(nu, series_max * near)
        b = bessel_j_miller(nu, series_max * near)
        cross.add(np.max(np.abs(a - b) / np.abs(b)), nu=nu, threshold=series_max)
        a = bessel_j_miller(nu, asym_min * near)
        b = bessel_j_asymptotic(nu, asym_min * near)
        cross.add(np.max(np.abs(a - b) / np.abs(b)), nu=nu, threshold=asym_min)
    deriv = _Tracker("d/dx[x^{(v+1)/2} J_{v+1}(2 sqrt(xy))/sqrt(y)] = x^{v/2} J_v", 1e-6)
    rng = np.random.default_rng(seed)
    h = 1e-5
    for _ in range(20):
        x, y = rng.uniform(0.1, 5, size=2)
        nu = float(rng.uniform(0, 3))

        def g(t):
            return t ** ((nu + 1) / 2) * bessel_j(nu + 1, 2 * math.sqrt(t * y)) / math.sqrt(y)

        fd_val = (g(x + h) - g(x - h)) / (2 * h)
        deriv.add(abs(fd_val - x ** (nu / 2) * bessel_j(nu, 2 * math.sqrt(x * y))), x=x, y=y, nu=nu)
    orth = _Tracker("Laguerre orthogonality (relative)", 1e-9)
    for d in range(6):
        for n in range(9):
            for m in range(n, 9):
                val = integrate_halfline(
                    lambda t: np.exp(-t) * t ** d * laguerre(n, d, t) * laguerre(m, d, t),
                    1.0, 0.0, 1e-13).value.real
                want = math.factorial(n + d) / math.factorial(n) if n == m else 0.0
                orth.add(abs(val - want) / (math.factorial(n + d) / math.factorial(n)),
                         d=d, n=n, m=m)
    return SuiteReport("special", 4, [rec.check(), cross.check(), deriv.check(), orth.check()])


SUITES = {
    "inversion": inversion,
    "weber": weber,
    "diagram": diagram,
    "isometry": isometry,
    "derivative": derivative,
    "grouplaw": grouplaw,
    "intertwining": intertwining,
    "lie": lie,
    "basis": basis,
    "membership": membership,
    "gl2": gl2,
    "special": special,
}

# which parameter each suite takes: "nu" (complex order), "d" (positive integer) or none
SUITE_PARAMETER = {
    "inversion": "nu", "weber": "nu", "diagram": "nu", "isometry": "nu", "derivative": "nu",
    "grouplaw": "d", "intertwining": "d", "lie": "d", "basis": "d", "membership": "d",
    "gl2": "d", "special": None,
}

__all__ = ["Check", "SuiteReport", "SUITES", "SUITE_PARAMETER"] + list(SUITES)
